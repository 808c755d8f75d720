// frontfill: variable-density node generation for meshless PDE solvers.
// Subcommands: fill, quality, bench, solve. Exit codes: 0 success,
// 1 usage/config error, 2 runtime/numeric error.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "frontfill/commands.hpp"

namespace {

// Default-thread override: used when neither --threads nor the config
// sets a thread count explicitly.
std::optional<int> env_threads() {
  const char* env = std::getenv("FRONTFILL_THREADS");
  if (!env || !*env) return std::nullopt;
  char* end = nullptr;
  long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1)
    throw frontfill::ConfigError("FRONTFILL_THREADS must be a positive integer");
  return static_cast<int>(v);
}

std::string replace_ext(const std::string& path, const std::string& ext) {
  std::string base = path;
  if (base.size() > 3 && base.compare(base.size() - 3, 3, ".gz") == 0)
    base.resize(base.size() - 3);
  if (auto dot = base.rfind('.'); dot != std::string::npos) base.resize(dot);
  return base + ext;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parallel variable-density node generation for meshless PDE discretization"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  frontfill::Overrides overrides;
  int threads_flag = 0;

  auto add_common = [&](CLI::App* cmd, bool with_threads) {
    cmd->add_option("--config", config_path, "JSON run configuration")->required();
    auto numeric = [](auto setter) {
      return [setter](const std::vector<std::string>& v) {
        try {
          std::size_t used = 0;
          setter(v[0], used);
          return used == v[0].size();
        } catch (const std::exception&) {
          return false;
        }
      };
    };
    cmd->add_option("--seed", numeric([&](const std::string& s, std::size_t& used) {
      overrides.rng_seed = std::stoull(s, &used);
    }), "Override rng_seed");
    cmd->add_option("--nc", numeric([&](const std::string& s, std::size_t& used) {
      overrides.n_c = std::stoi(s, &used);
    }), "Override the great-circle candidate count");
    cmd->add_option("--ns", numeric([&](const std::string& s, std::size_t& used) {
      overrides.n_s = std::stoi(s, &used);
    }), "Override the requested seed count");
    cmd->add_option("--target-np", numeric([&](const std::string& s, std::size_t& used) {
      overrides.target_np = std::stoll(s, &used);
    }), "Override the target point count");
    if (with_threads)
      cmd->add_option("--threads", threads_flag, "Override the worker thread count");
  };

  // fill
  auto* fill = app.add_subcommand("fill", "Generate points and write them as CSV");
  bool sequential = false;
  add_common(fill, true);
  fill->add_option("--out", out_path, "Points CSV path (.gz compresses)")
      ->default_val("points.csv");
  fill->add_flag("--sequential", sequential,
                 "Run the sequential reference implementation (threads must be 1)");

  // quality
  auto* quality = app.add_subcommand("quality", "Quality report for a generated point set");
  std::string points_path;
  int k = 5, probes = 20, bins = 40;
  add_common(quality, false);
  quality->add_option("--points", points_path, "Points CSV produced by fill")->required();
  quality->add_option("--k", k, "Neighbours per node for the regularity statistics");
  quality->add_option("--probes", probes, "Fill-distance probes per node");
  quality->add_option("--bins", bins, "Histogram bin count");
  quality->add_option("--out", out_path, "Report JSON path")->default_val("quality.json");

  // bench
  auto* bench = app.add_subcommand("bench", "Timing sweep against the sequential baseline");
  std::vector<int> thread_list;
  std::vector<int64_t> np_list;
  int repeats = 3;
  add_common(bench, false);
  bench->add_option("--threads", thread_list, "Thread counts to time")->delimiter(',');
  bench->add_option("--np", np_list, "Target point counts")->delimiter(',');
  bench->add_option("--repeats", repeats, "Repetitions per configuration");
  bench->add_option("--out", out_path, "Bench CSV path")->default_val("bench.csv");

  // solve
  auto* solve = app.add_subcommand("solve", "Manufactured Poisson validation study");
  int stencil = 15;
  std::vector<double> refine = {1.0};
  std::string sol_prefix;
  add_common(solve, true);
  solve->add_option("--stencil", stencil, "Stencil size n (closest nodes)");
  solve->add_option("--refine", refine, "Spacing scale per refinement")->delimiter(',');
  solve->add_option("--solutions", sol_prefix, "Prefix for per-refinement solution CSVs");
  solve->add_option("--out", out_path, "Errors CSV path")->default_val("errors.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (threads_flag > 0) overrides.threads = threads_flag;
    else if (auto env = env_threads()) overrides.threads = env;

    if (fill->parsed()) {
      frontfill::FillOptions opts{overrides, sequential};
      frontfill::cmd_fill(config_path, opts, out_path, replace_ext(out_path, ".stats.json"));
    } else if (quality->parsed()) {
      frontfill::cmd_quality(config_path, points_path, k, probes, bins, out_path,
                             replace_ext(out_path, "_hist.csv"));
    } else if (bench->parsed()) {
      frontfill::cmd_bench(config_path, overrides, thread_list, np_list, repeats, out_path,
                           replace_ext(out_path, ".json"));
    } else if (solve->parsed()) {
      frontfill::cmd_solve(config_path, overrides, stencil, refine, out_path, sol_prefix);
    }
  } catch (const frontfill::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
