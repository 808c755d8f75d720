#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "frontfill/fill.hpp"

namespace frontfill {

// One timed configuration. threads == 0 marks the sequential baseline
// (the true sequential implementation: no locks, one flat dynamic
// index), against which speedups are computed.
struct BenchRow {
  int threads = 0;
  int64_t target_np = 0;
  int64_t actual_np = 0;
  double wall_s = 0;          // mean over repeats
  double per_point_ns = 0;    // mean over repeats of wall / actual
  double speedup = 0;         // baseline normalized time / this row's
  std::vector<double> thread_busy_s;  // mean per-thread busy times
};

struct BenchReport {
  std::vector<BenchRow> rows;
};

// Times the sequential baseline and the parallel fill at each requested
// thread count, for each target point count. Spacing is rescaled per
// target so the same configuration covers the whole sweep; execution
// times are normalized by the actual number of placed points before
// speedups are formed. No two timed fills run concurrently.
template <int D>
BenchReport time_fill(const Domain<D>& domain, const SpacingFn<D>& h,
                      std::span<const Point<D>> user_seeds, const FillConfig& cfg,
                      const std::vector<int>& thread_counts,
                      const std::vector<int64_t>& np_targets, int repeats) {
  if (repeats < 1) throw std::invalid_argument("repeats must be at least 1");
  if (thread_counts.empty()) throw std::invalid_argument("thread count list is empty");
  if (np_targets.empty()) throw std::invalid_argument("target point count list is empty");

  int64_t np_base = estimate_point_count<D>(domain, h, 100000, cfg.rng_seed);

  BenchReport report;
  for (int64_t np : np_targets) {
    double scale = std::pow(static_cast<double>(np_base) / np, 1.0 / D);
    ScaledSpacing<D> hs(h, scale);

    auto timed = [&](auto&& run) {
      BenchRow row;
      std::vector<double> busy_sum;
      for (int rep = 0; rep < repeats; ++rep) {
        PointSet<D> ps = run();
        row.actual_np = static_cast<int64_t>(ps.points.size());
        row.wall_s += ps.stats.wall_s;
        row.per_point_ns += ps.stats.wall_s / ps.points.size() * 1e9;
        if (busy_sum.size() < ps.stats.threads.size()) busy_sum.resize(ps.stats.threads.size());
        for (std::size_t t = 0; t < ps.stats.threads.size(); ++t)
          busy_sum[t] += ps.stats.threads[t].busy_s;
      }
      row.wall_s /= repeats;
      row.per_point_ns /= repeats;
      for (double& b : busy_sum) b /= repeats;
      row.thread_busy_s = std::move(busy_sum);
      row.target_np = np;
      return row;
    };

    BenchRow base = timed([&] {
      return fill_sequential<D>(domain, hs, user_seeds, cfg.n_c, cfg.rng_seed,
                                cfg.max_points > 0 ? cfg.max_points : 4 * np);
    });
    base.threads = 0;
    base.speedup = 1.0;
    report.rows.push_back(base);

    for (int p : thread_counts) {
      if (p < 1) throw std::invalid_argument("thread counts must be positive");
      FillConfig pcfg = cfg;
      pcfg.threads = p;
      pcfg.target_np = np;
      BenchRow row = timed([&] { return fill_parallel<D>(domain, hs, user_seeds, pcfg); });
      row.threads = p;
      row.speedup = base.per_point_ns / row.per_point_ns;
      report.rows.push_back(row);
    }
  }
  return report;
}

// CSV with the pinned header "threads,target_np,actual_np,wall_s,per_point_ns,speedup".
std::string bench_csv(const BenchReport& report);
void write_bench_csv(const BenchReport& report, const std::string& path);

// JSON variant that also carries the per-thread busy times.
std::string bench_json(const BenchReport& report);
void write_bench_json(const BenchReport& report, const std::string& path);

// Rows of "threads,np,speedup", one per (threads, target) pair. Throws if
// a target lacks its sequential baseline row.
std::vector<std::string> speedup_table(const BenchReport& report);

}  // namespace frontfill
