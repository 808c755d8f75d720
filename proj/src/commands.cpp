#include "frontfill/commands.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "frontfill/bench.hpp"
#include "frontfill/points_io.hpp"
#include "frontfill/quality.hpp"
#include "frontfill/solver.hpp"

namespace frontfill {

namespace {

using nlohmann::json;

template <typename F>
void dispatch_dim(int dim, F&& f) {
  switch (dim) {
    case 1: f(std::integral_constant<int, 1>{}); return;
    case 2: f(std::integral_constant<int, 2>{}); return;
    case 3: f(std::integral_constant<int, 3>{}); return;
    default: throw ConfigError("config.dim: must be 1, 2 or 3");
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

std::string format17(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

json stats_json(const FillStats& stats, std::size_t n_points, std::size_t n_seeds,
                const FillConfig& cfg) {
  json per_thread = json::array();
  for (const ThreadStats& t : stats.threads)
    per_thread.push_back({{"placed", t.placed},
                          {"rejected_domain", t.rejected_domain},
                          {"rejected_proximity", t.rejected_proximity},
                          {"busy_s", t.busy_s}});
  return json{{"points", n_points},
              {"seeds", n_seeds},
              {"threads", cfg.threads},
              {"nc", cfg.n_c},
              {"rng_seed", cfg.rng_seed},
              {"target_np", cfg.target_np},
              {"wall_s", stats.wall_s},
              {"bootstrap",
               {{"seconds", stats.bootstrap_s},
                {"iterations", stats.bootstrap_iterations},
                {"a", stats.bootstrap_a}}},
              {"lock_contention", stats.lock_contention},
              {"per_thread", per_thread}};
}

}  // namespace

void cmd_fill(const std::string& config_path, const FillOptions& opts,
              const std::string& points_out, const std::string& stats_out) {
  RunConfig cfg = load_run_config(config_path, opts.overrides);
  if (opts.sequential && cfg.fill.threads != 1)
    throw ConfigError("--sequential requires threads = 1");

  dispatch_dim(cfg.dim, [&](auto dimc) {
    constexpr int D = dimc();
    Problem<D>& prob = cfg.problem<D>();
    if (cfg.fill.target_np == 0)
      cfg.fill.target_np =
          estimate_point_count<D>(*prob.domain, *prob.spacing, 100000, cfg.fill.rng_seed);

    PointSet<D> set;
    if (opts.sequential) {
      int64_t cap = cfg.fill.max_points > 0 ? cfg.fill.max_points : 4 * cfg.fill.target_np;
      set = fill_sequential<D>(*prob.domain, *prob.spacing, prob.seeds, cfg.fill.n_c,
                               cfg.fill.rng_seed, cap);
    } else {
      set = fill_parallel<D>(*prob.domain, *prob.spacing, prob.seeds, cfg.fill);
    }
    sort_by_order(set);
    write_points(set, points_out);
    write_text(stats_out,
               stats_json(set.stats, set.points.size(), set.seeds.size(), cfg.fill).dump(2) + "\n");
  });
}

void cmd_quality(const std::string& config_path, const std::string& points_path, int k,
                 int probe_density, int bins, const std::string& report_out,
                 const std::string& hist_out) {
  RunConfig cfg = load_run_config(config_path);
  int file_dim = points_file_dim(points_path);
  if (file_dim != cfg.dim)
    throw ConfigError("points file is " + std::to_string(file_dim) + "-D but the config is " +
                      std::to_string(cfg.dim) + "-D");

  dispatch_dim(cfg.dim, [&](auto dimc) {
    constexpr int D = dimc();
    Problem<D>& prob = cfg.problem<D>();
    PointSet<D> set = read_points<D>(points_path);
    std::vector<Point<D>> pts = set.coords();

    QualityReport rep = neighbor_distance_stats<D>(pts, *prob.spacing, k);
    auto [edges, counts] = histogram<D>(pts, *prob.spacing, k, bins);
    rep.hist_edges = std::move(edges);
    rep.hist_counts = std::move(counts);
    quasi_uniformity<D>(pts, *prob.domain, *prob.spacing, probe_density, rep);

    json j{{"k", rep.k},
           {"n_points", rep.n_points},
           {"mean_dbar", rep.mean_dbar},
           {"std_dbar", rep.std_dbar},
           {"mean_spread", rep.mean_spread},
           {"h_fill_norm", rep.h_fill_norm},
           {"s_sep_norm", rep.s_sep_norm},
           {"gamma", rep.gamma},
           {"histogram", {{"edges", rep.hist_edges}, {"counts", rep.hist_counts}}}};
    write_text(report_out, j.dump(2) + "\n");

    std::string hist = "bin_center,count\n";
    for (std::size_t b = 0; b + 1 < rep.hist_edges.size(); ++b)
      hist += format17(0.5 * (rep.hist_edges[b] + rep.hist_edges[b + 1])) + ',' +
              std::to_string(rep.hist_counts[b]) + '\n';
    write_text(hist_out, hist);
  });
}

void cmd_bench(const std::string& config_path, const Overrides& overrides,
               const std::vector<int>& threads, const std::vector<int64_t>& np_targets,
               int repeats, const std::string& csv_out, const std::string& json_out) {
  if (threads.empty()) throw ConfigError("--threads: at least one thread count is required");
  if (np_targets.empty()) throw ConfigError("--np: at least one target size is required");
  if (repeats < 1) throw ConfigError("--repeats: must be at least 1");
  for (int p : threads)
    if (p < 1) throw ConfigError("--threads: thread counts must be positive");

  RunConfig cfg = load_run_config(config_path, overrides);
  dispatch_dim(cfg.dim, [&](auto dimc) {
    constexpr int D = dimc();
    Problem<D>& prob = cfg.problem<D>();
    BenchReport report = time_fill<D>(*prob.domain, *prob.spacing, prob.seeds, cfg.fill, threads,
                                      np_targets, repeats);
    write_bench_csv(report, csv_out);
    write_bench_json(report, json_out);
  });
}

void cmd_solve(const std::string& config_path, const Overrides& overrides, int stencil_size,
               const std::vector<double>& refinements, const std::string& errors_out,
               const std::string& solution_prefix) {
  if (stencil_size < 6)
    throw ConfigError("--stencil: need at least 6 nodes for degree-2 augmentation");
  if (refinements.empty()) throw ConfigError("--refine: at least one refinement is required");
  for (double r : refinements)
    if (!(r > 0)) throw ConfigError("--refine: scales must be positive");

  RunConfig cfg = load_run_config(config_path, overrides);
  if (cfg.dim != 2) throw ConfigError("solve requires a 2-D config");
  Problem<2>& prob = cfg.problem<2>();

  // Manufactured solution u = sin(pi x/3) sin(pi y/3).
  auto exact = [](const Point<2>& p) {
    return std::sin(M_PI * p.v[0] / 3.0) * std::sin(M_PI * p.v[1] / 3.0);
  };
  auto rhs = [&](const Point<2>& p) { return -2.0 / 9.0 * M_PI * M_PI * exact(p); };

  std::string csv = "N,e1,einf\n";
  json summary = json::array();
  for (std::size_t i = 0; i < refinements.size(); ++i) {
    ScaledSpacing<2> h(*prob.spacing, refinements[i]);
    std::vector<Point<2>> boundary = boundary_sample_2d(*prob.domain, h);

    FillConfig fill_cfg = cfg.fill;
    fill_cfg.target_np = estimate_point_count<2>(*prob.domain, h, 100000, fill_cfg.rng_seed);
    PointSet<2> interior_set;
    if (fill_cfg.threads == 1) {
      interior_set = fill_sequential<2>(*prob.domain, h, prob.seeds, fill_cfg.n_c,
                                        fill_cfg.rng_seed, 4 * fill_cfg.target_np, boundary);
    } else {
      interior_set = fill_parallel<2>(*prob.domain, h, prob.seeds, fill_cfg, boundary);
    }

    Discretization disc =
        build_discretization(interior_set.coords(), boundary, stencil_size);
    std::vector<double> u = solve_poisson_dirichlet(disc, rhs, exact);

    std::vector<Point<2>> nodes;
    nodes.reserve(disc.total());
    nodes.insert(nodes.end(), disc.interior.begin(), disc.interior.end());
    nodes.insert(nodes.end(), disc.boundary.begin(), disc.boundary.end());
    auto [e1, einf] = error_norms(u, exact, nodes);

    csv += std::to_string(disc.total()) + ',' + format17(e1) + ',' + format17(einf) + '\n';
    summary.push_back({{"refinement", refinements[i]},
                       {"N", disc.total()},
                       {"interior", disc.interior.size()},
                       {"boundary", disc.boundary.size()},
                       {"e1", e1},
                       {"einf", einf}});

    if (!solution_prefix.empty()) {
      std::string sol = "x,y,u\n";
      for (std::size_t n = 0; n < nodes.size(); ++n)
        sol += format17(nodes[n].v[0]) + ',' + format17(nodes[n].v[1]) + ',' + format17(u[n]) +
               '\n';
      write_text(solution_prefix + "_" + std::to_string(i) + ".csv", sol);
    }
  }
  write_text(errors_out, csv);

  std::string summary_path = errors_out;
  if (auto dot = summary_path.rfind('.'); dot != std::string::npos)
    summary_path.resize(dot);
  write_text(summary_path + ".json", json{{"rows", summary}}.dump(2) + "\n");
}

}  // namespace frontfill
