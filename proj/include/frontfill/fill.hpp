#pragma once

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <limits>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "frontfill/candidates.hpp"
#include "frontfill/domain.hpp"
#include "frontfill/kdtree.hpp"
#include "frontfill/point.hpp"
#include "frontfill/spacing.hpp"
#include "frontfill/two_level_index.hpp"

namespace frontfill {

struct FillConfig {
  int n_c = 12;            // candidates on the great circle
  int threads = 1;         // worker threads p
  int n_s = 32;            // requested seed count for bootstrapping
  int64_t target_np = 0;   // estimated total points; 0 = estimate internally
  uint64_t rng_seed = 0;
  int64_t max_points = 0;  // safety cap; 0 = 4 * target_np
  bool bootstrap = true;   // false: user seeds become the top level as-is
};

struct ThreadStats {
  uint64_t placed = 0;
  uint64_t rejected_domain = 0;
  uint64_t rejected_proximity = 0;
  double busy_s = 0;
};

struct FillStats {
  std::vector<ThreadStats> threads;
  double wall_s = 0;
  double bootstrap_s = 0;
  int bootstrap_iterations = 0;
  double bootstrap_a = 0;
  uint64_t lock_contention = 0;
};

template <int D>
struct PointRecord {
  Point<D> p;
  int32_t thread = 0;  // -1 for bootstrap seeds
  int32_t cell = 0;
  int64_t order = 0;   // insertion sequence
};

template <int D>
struct PointSet {
  std::vector<PointRecord<D>> points;  // includes the seeds
  std::vector<Point<D>> seeds;
  FillStats stats;

  std::vector<Point<D>> coords() const {
    std::vector<Point<D>> out;
    out.reserve(points.size());
    for (const auto& r : points) out.push_back(r.p);
    return out;
  }
};

namespace detail {

inline double now_s() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

constexpr int64_t kUncapped = std::numeric_limits<int64_t>::max();

// Relative slack on the proximity radius, so a candidate is never blocked
// by its own parent through floating-point noise in the distance.
constexpr double kProximitySlack = 1.0 - 1e-10;

// Moves a candidate along its ray from p to the self-consistent radius
// r = h(p + r*u), so that the candidate sits exactly one local spacing
// away from the point it was expanded from. With the proximity threshold
// evaluated at the candidate, this is what lets fronts advance into
// regions of growing spacing. Fixed-point iteration handles the smooth
// case; a bisection fallback covers steep spacings (notably the
// amplified bootstrap spacing). Returns false when no usable radius
// exists along the ray (e.g. h non-positive there).
template <int D>
bool settle_candidate(const SpacingFn<D>& h, const Point<D>& p, Point<D>& c, double& r) {
  constexpr double kTol = 1e-12;
  auto h_at = [&](double radius, Point<D>& out) -> double {
    out = p + (c - p) * (radius / r);
    double v = h.eval(out);
    return (v > 0.0 && std::isfinite(v)) ? v : -1.0;
  };

  // Secant iteration on f(r) = h(p + r*u) - r; f is near-linear for
  // smooth spacings, so this usually lands in 2-3 evaluations.
  Point<D> probe = c;
  double r0 = r, f0 = 0;
  {
    double hc = h_at(r0, probe);
    if (hc < 0) return false;
    f0 = hc - r0;
    if (std::fabs(f0) <= kTol * r0) {
      c = probe;
      r = hc;
      return true;
    }
  }
  double r1 = r0 + f0;  // the plain fixed-point step
  for (int it = 0; it < 8 && r1 > 0; ++it) {
    double hc = h_at(r1, probe);
    if (hc < 0) return false;
    double f1 = hc - r1;
    if (std::fabs(f1) <= kTol * r1) {
      c = probe;
      r = hc;
      return true;
    }
    double denom = f1 - f0;
    double next = denom != 0 ? r1 - f1 * (r1 - r0) / denom : r1 + f1;
    if (!(next > 0) || !std::isfinite(next) || next > 8 * std::max(r1, r0))
      next = r1 + f1;  // secant step went wild; fall back to fixed point
    r0 = r1;
    f0 = f1;
    r1 = next;
  }

  // Bracket a root of h(p + r*u) - r: positive at r -> 0+, negative once
  // r exceeds the (bounded) spacing along the ray.
  double lo = 0, hi = r;
  for (int it = 0; it < 64; ++it) {
    double hv = h_at(hi, probe);
    if (hv < 0) return false;
    if (hv <= hi) break;
    lo = hi;
    hi *= 2;
  }
  for (int it = 0; it < 80; ++it) {
    double mid = 0.5 * (lo + hi);
    double hv = h_at(mid, probe);
    if (hv < 0) return false;
    if (hv > mid) lo = mid;
    else hi = mid;
    if (hi - lo <= kTol * hi) break;
  }
  double final_h = h_at(hi, probe);
  if (final_h < 0 || std::fabs(final_h - hi) > 1e-9 * hi) return false;
  c = probe;
  r = final_h;
  return true;
}

}  // namespace detail

// Advancing-front fill: a FIFO queue starts from the seeds; each popped
// point is expanded into candidates on the sphere of radius h(p) with a
// fresh random rotation, each candidate settles to its self-consistent
// radius along its ray, and it survives if it lies inside the domain and
// no existing point is closer than the spacing at the candidate itself.
// Terminates when the queue empties.
//
// `obstacles` are pre-existing points (e.g. boundary nodes) that take
// part in the proximity checks but are neither expanded nor reported.
template <int D>
PointSet<D> fill_sequential(const Domain<D>& domain, const SpacingFn<D>& h,
                            std::span<const Point<D>> seeds, int n_c, uint64_t rng_seed,
                            int64_t max_points = detail::kUncapped,
                            std::span<const Point<D>> obstacles = {}) {
  if (seeds.empty()) throw std::invalid_argument("at least one seed point is required");
  for (const auto& s : seeds)
    if (!domain.contains(s))
      throw std::invalid_argument("seed point " + format_point(s) + " lies outside the domain");

  double t0 = detail::now_s();
  SpherePattern<D> pattern = unit_sphere_pattern<D>(n_c);
  std::mt19937_64 rng(rng_seed);

  DynamicKdTree<D> index;
  for (const auto& o : obstacles) index.insert(o);

  PointSet<D> out;
  out.seeds.assign(seeds.begin(), seeds.end());
  out.points.reserve(seeds.size() * 4);
  for (const auto& s : seeds) {
    out.points.push_back(PointRecord<D>{s, 0, 0, static_cast<int64_t>(out.points.size())});
    index.insert(s);
  }

  ThreadStats stats;
  std::vector<Point<D>> candidates;
  std::size_t head = 0;  // the output list doubles as the FIFO queue
  while (head < out.points.size()) {
    Point<D> p = out.points[head++].p;
    double radius = checked_spacing(h, p);
    expand(p, radius, pattern, random_rotation<D>(rng), candidates);
    for (Point<D> c : candidates) {
      double hc = radius;
      if (!detail::settle_candidate(h, p, c, hc) || !domain.contains(c)) {
        ++stats.rejected_domain;
        continue;
      }
      if (index.nearest_within(c, hc * detail::kProximitySlack).first >= 0) {
        ++stats.rejected_proximity;
        continue;
      }
      index.insert(c);
      out.points.push_back(PointRecord<D>{c, 0, 0, static_cast<int64_t>(out.points.size())});
      ++stats.placed;
      if (static_cast<int64_t>(out.points.size()) > max_points)
        throw std::runtime_error(
            "fill exceeded max_points = " + std::to_string(max_points) +
            "; the spacing function may not be bounded away from zero on this domain");
    }
  }

  stats.busy_s = detail::now_s() - t0;
  out.stats.threads = {stats};
  out.stats.wall_s = stats.busy_s;
  return out;
}

// Monte-Carlo point-count estimate: c_d * Vol(bbox)/M * sum h(s)^-d over
// in-domain samples. The packing constant c_d is calibrated once per
// dimension from a pilot fill of the unit box with constant spacing.
template <int D>
double packing_constant() {
  static const double c = [] {
    Aabb<D> unit;
    for (int i = 0; i < D; ++i) {
      unit.lo.v[i] = 0;
      unit.hi.v[i] = 1;
    }
    Box<D> box(unit);
    double h = D == 1 ? 0.005 : D == 2 ? 0.02 : 0.08;
    ConstantSpacing<D> spacing(h);
    std::vector<Point<D>> seed = {unit.center()};
    PointSet<D> pilot = fill_sequential<D>(box, spacing, seed, 12, 0xC0FFEEULL);
    return static_cast<double>(pilot.points.size()) * std::pow(h, D);
  }();
  return c;
}

template <int D>
int64_t estimate_point_count(const Domain<D>& domain, const SpacingFn<D>& h, int64_t mc_samples,
                             uint64_t rng_seed) {
  if (mc_samples < 1000) throw std::invalid_argument("mc_samples must be at least 1000");
  Aabb<D> box = domain.bounding_box();
  double vol = box.volume();
  if (!(vol > 0)) throw std::runtime_error("domain bounding box has zero volume");

  std::mt19937_64 rng(rng_seed);
  double sum = 0;
  int64_t inside = 0;
  for (int64_t i = 0; i < mc_samples; ++i) {
    Point<D> s = box.sample(rng);
    if (!domain.contains(s)) continue;
    ++inside;
    sum += std::pow(checked_spacing(h, s), -D);
  }
  if (inside == 0)
    throw std::runtime_error("no Monte-Carlo samples fell inside the domain");
  double estimate = packing_constant<D>() * vol / static_cast<double>(mc_samples) * sum;
  return std::max<int64_t>(1, std::llround(estimate));
}

template <int D>
struct SeedSet {
  std::vector<Point<D>> seeds;
  double a = 0;        // final amplification factor
  int iterations = 0;  // halvings + 1
  double seconds = 0;
};

// Bootstrapping: run the fill with spacing amplified by
// a = 10 * (n_p / n_s)^(1/d), halving a until at least n_s points come
// out. The result overshoots rather than undershoots by construction.
template <int D>
SeedSet<D> bootstrap_seeds(const Domain<D>& domain, const SpacingFn<D>& h,
                           std::span<const Point<D>> user_seeds, int n_s, int64_t n_p_estimate,
                           int n_c, uint64_t rng_seed,
                           int64_t max_points = detail::kUncapped) {
  if (user_seeds.empty()) throw std::invalid_argument("at least one user seed is required");
  if (n_s < 1) throw std::invalid_argument("n_s must be positive");
  if (n_p_estimate < 1) throw std::invalid_argument("n_p_estimate must be positive");

  double t0 = detail::now_s();
  double a = 10.0 * std::pow(static_cast<double>(n_p_estimate) / n_s, 1.0 / D);
  constexpr int kMaxHalvings = 32;
  for (int iter = 0; iter <= kMaxHalvings; ++iter) {
    ScaledSpacing<D> amplified(h, a);
    PointSet<D> ps = fill_sequential<D>(domain, amplified, user_seeds, n_c, rng_seed, max_points);
    if (static_cast<int>(ps.points.size()) >= n_s) {
      SeedSet<D> out;
      out.seeds = ps.coords();
      out.a = a;
      out.iterations = iter + 1;
      out.seconds = detail::now_s() - t0;
      return out;
    }
    a *= 0.5;
  }
  throw std::runtime_error("bootstrapping failed to reach " + std::to_string(n_s) +
                           " seeds within 32 halvings of the amplification factor");
}

// Parallel fill per the two-level scheme: bootstrapped seeds become the
// read-only top level, workers run the sequential loop over their own
// FIFO queues and route every insertion through the guarded index. The
// seeds are part of the output; `obstacles` take part in the proximity
// checks of the fill phase but are neither expanded nor reported.
template <int D>
PointSet<D> fill_parallel(const Domain<D>& domain, const SpacingFn<D>& h,
                          std::span<const Point<D>> user_seeds, const FillConfig& cfg,
                          std::span<const Point<D>> obstacles = {}) {
  if (cfg.threads < 1) throw std::invalid_argument("threads must be positive");
  if (user_seeds.empty()) throw std::invalid_argument("at least one seed point is required");
  for (const auto& s : user_seeds)
    if (!domain.contains(s))
      throw std::invalid_argument("seed point " + format_point(s) + " lies outside the domain");

  double t0 = detail::now_s();
  int64_t target = cfg.target_np > 0
                       ? cfg.target_np
                       : estimate_point_count<D>(domain, h, 100000, cfg.rng_seed);
  int64_t max_points = cfg.max_points > 0 ? cfg.max_points : 4 * target;

  PointSet<D> out;
  if (cfg.bootstrap) {
    SeedSet<D> boot =
        bootstrap_seeds<D>(domain, h, user_seeds, cfg.n_s, target, cfg.n_c, cfg.rng_seed,
                           max_points);
    out.seeds = std::move(boot.seeds);
    out.stats.bootstrap_s = boot.seconds;
    out.stats.bootstrap_iterations = boot.iterations;
    out.stats.bootstrap_a = boot.a;
  } else {
    out.seeds.assign(user_seeds.begin(), user_seeds.end());
  }

  const int n_seeds = static_cast<int>(out.seeds.size());
  TwoLevelIndex<D> index(out.seeds);
  for (const auto& o : obstacles) index.insert_unchecked(o);

  out.points.reserve(static_cast<std::size_t>(std::min<int64_t>(max_points, 2 * target)));
  for (int i = 0; i < n_seeds; ++i)
    out.points.push_back(PointRecord<D>{out.seeds[i], -1, i, i});

  const int p = cfg.threads;
  SpherePattern<D> pattern = unit_sphere_pattern<D>(cfg.n_c);
  std::atomic<int64_t> sequence{n_seeds};
  std::atomic<bool> overflow{false};
  std::atomic<bool> failed{false};
  std::string error_message;
  std::mutex error_mutex;

  std::vector<std::vector<PointRecord<D>>> produced(p);
  std::vector<ThreadStats> stats(p);

  omp_set_dynamic(0);
#pragma omp parallel num_threads(p)
  {
    int tid = omp_get_thread_num();
#pragma omp single
    {
      if (omp_get_num_threads() != p) failed.store(true);
    }
    if (!failed.load(std::memory_order_relaxed)) {
      double tstart = detail::now_s();
      try {
        std::mt19937_64 rng(cfg.rng_seed ^ static_cast<uint64_t>(tid));
        typename TwoLevelIndex<D>::Scratch scratch;
        std::vector<Point<D>> candidates;
        ThreadStats& st = stats[tid];
        std::vector<PointRecord<D>>& mine = produced[tid];

        // Round-robin share of the seeds, in generation order.
        std::vector<Point<D>> queue;
        for (int i = tid; i < n_seeds; i += p) queue.push_back(out.seeds[i]);
        std::size_t head = 0;

        while (head < queue.size() && !overflow.load(std::memory_order_relaxed) &&
               !failed.load(std::memory_order_relaxed)) {
          Point<D> point = queue[head++];
          double radius = checked_spacing(h, point);
          expand(point, radius, pattern, random_rotation<D>(rng), candidates);
          for (Point<D> c : candidates) {
            double hc = radius;
            if (!detail::settle_candidate(h, point, c, hc) || !domain.contains(c)) {
              ++st.rejected_domain;
              continue;
            }
            auto res = index.guarded_try_place(c, hc * detail::kProximitySlack, scratch);
            if (!res.accepted) {
              ++st.rejected_proximity;
              continue;
            }
            int64_t order = sequence.fetch_add(1, std::memory_order_relaxed);
            if (order >= max_points) {
              overflow.store(true, std::memory_order_relaxed);
              break;
            }
            mine.push_back(PointRecord<D>{c, tid, res.cell, order});
            queue.push_back(c);
            ++st.placed;
          }
        }
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!failed.exchange(true)) error_message = e.what();
      }
      stats[tid].busy_s = detail::now_s() - tstart;
    }
  }

  if (failed.load())
    throw std::runtime_error(error_message.empty() ? "failed to start the requested worker threads"
                                                   : error_message);
  if (overflow.load())
    throw std::runtime_error(
        "fill exceeded max_points = " + std::to_string(max_points) +
        "; the spacing function may not be bounded away from zero on this domain");

  for (int t = 0; t < p; ++t)
    out.points.insert(out.points.end(), produced[t].begin(), produced[t].end());
  out.stats.threads = std::move(stats);
  out.stats.lock_contention = index.contended_acquisitions();
  out.stats.wall_s = detail::now_s() - t0;

  // Quiescent sanity check: worker records and cell contents must agree.
  if (out.points.size() + obstacles.size() != index.total_size())
    throw std::logic_error("worker records disagree with the index contents");
  return out;
}

}  // namespace frontfill
