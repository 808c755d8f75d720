#pragma once

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "frontfill/domain.hpp"
#include "frontfill/kdtree.hpp"
#include "frontfill/point.hpp"
#include "frontfill/spacing.hpp"

namespace frontfill {

// Local regularity and quasi-uniformity quantities of a node set.
// d'_{i,j} is the distance from node i to its j-th nearest neighbour,
// normalized by h(p_i).
struct QualityReport {
  int k = 0;
  std::size_t n_points = 0;
  double mean_dbar = 0;    // mean over i of mean_j d'_{i,j}
  double std_dbar = 0;     // std over i of the same
  double mean_spread = 0;  // mean over i of (d_i^max)' - (d_i^min)'
  std::vector<double> hist_edges;
  std::vector<uint64_t> hist_counts;
  double h_fill_norm = 0;  // max normalized fill distance
  double s_sep_norm = 0;   // min normalized separation distance
  double gamma = 0;        // h_fill_norm / s_sep_norm
};

// All N*k normalized neighbour distances, grouped per point (row i holds
// d'_{i,1} .. d'_{i,k} ascending).
template <int D>
std::vector<double> normalized_knn_distances(std::span<const Point<D>> points,
                                             const SpacingFn<D>& h, int k) {
  const int64_t n = static_cast<int64_t>(points.size());
  if (k < 1) throw std::invalid_argument("k must be positive");
  if (n <= k) throw std::invalid_argument("need more than k points");

  StaticKdTree<D> tree(std::vector<Point<D>>(points.begin(), points.end()));
  std::vector<double> d(static_cast<std::size_t>(n) * k);
#pragma omp parallel
  {
    std::vector<std::pair<int, double>> hits;
    std::vector<Hit> heap;
#pragma omp for schedule(static)
    for (int64_t i = 0; i < n; ++i) {
      tree.knn(points[i], k + 1, hits, heap);
      double hi = checked_spacing(h, points[i]);
      // Skipping the node itself leaves exactly k entries; with duplicate
      // points the self entry can drop out of the k+1 hits, in which case
      // the first k are all genuine zero-distance neighbours.
      int written = 0;
      for (const auto& [idx, dist] : hits) {
        if (idx == i) continue;
        if (written == k) break;
        d[i * k + written++] = dist / hi;
      }
    }
  }
  return d;
}

template <int D>
QualityReport neighbor_distance_stats(std::span<const Point<D>> points, const SpacingFn<D>& h,
                                      int k) {
  std::vector<double> d = normalized_knn_distances(points, h, k);
  const std::size_t n = points.size();

  QualityReport rep;
  rep.k = k;
  rep.n_points = n;
  double sum = 0, sum2 = 0, spread = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = d.data() + i * k;
    double mean = 0, lo = row[0], hi = row[0];
    for (int j = 0; j < k; ++j) {
      mean += row[j];
      lo = std::min(lo, row[j]);
      hi = std::max(hi, row[j]);
    }
    mean /= k;
    sum += mean;
    sum2 += mean * mean;
    spread += hi - lo;
  }
  rep.mean_dbar = sum / n;
  rep.std_dbar = std::sqrt(std::max(0.0, sum2 / n - rep.mean_dbar * rep.mean_dbar));
  rep.mean_spread = spread / n;
  return rep;
}

// Equal-width histogram of all N*k normalized distances over
// [min d', max d']. A degenerate range collapses into one occupied bin.
template <int D>
std::pair<std::vector<double>, std::vector<uint64_t>> histogram(std::span<const Point<D>> points,
                                                                const SpacingFn<D>& h, int k,
                                                                int bins) {
  if (bins < 2) throw std::invalid_argument("need at least 2 bins");
  std::vector<double> d = normalized_knn_distances(points, h, k);
  auto [lo_it, hi_it] = std::minmax_element(d.begin(), d.end());
  double lo = *lo_it, hi = *hi_it;
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  std::vector<double> edges(bins + 1);
  for (int b = 0; b <= bins; ++b) edges[b] = lo + (hi - lo) * b / bins;
  std::vector<uint64_t> counts(bins, 0);
  for (double x : d) {
    int b = static_cast<int>((x - lo) / (hi - lo) * bins);
    ++counts[std::clamp(b, 0, bins - 1)];
  }
  return {std::move(edges), std::move(counts)};
}

// Quasi-uniformity quantities: s_X(p) is the exact nearest-neighbour
// distance; the fill distance h_{X,Omega}(p) is estimated as twice the
// largest probe-to-nearest-node distance over uniform random probes in
// the domain (the ball around such a probe contains no node). Both are
// normalized by h at the node; gamma is their max/min quotient.
template <int D>
void quasi_uniformity(std::span<const Point<D>> points, const Domain<D>& domain,
                      const SpacingFn<D>& h, int probe_density, QualityReport& rep,
                      uint64_t rng_seed = 0x51A51A) {
  const int64_t n = static_cast<int64_t>(points.size());
  if (n < 2)
    throw std::invalid_argument("separation distance is undefined for fewer than 2 nodes");
  if (probe_density < 10) throw std::invalid_argument("probe_density must be at least 10");

  StaticKdTree<D> tree(std::vector<Point<D>>(points.begin(), points.end()));

  double s_min = std::numeric_limits<double>::infinity();
#pragma omp parallel reduction(min : s_min)
  {
    std::vector<std::pair<int, double>> hits;
    std::vector<Hit> heap;
#pragma omp for schedule(static)
    for (int64_t i = 0; i < n; ++i) {
      tree.knn(points[i], 2, hits, heap);
      double sep = hits[0].first == i ? hits[1].second : hits[0].second;
      s_min = std::min(s_min, sep / checked_spacing(h, points[i]));
    }
  }

  // Uniform probes by rejection from the bounding box.
  const int64_t n_probes = n * probe_density;
  Aabb<D> box = domain.bounding_box();
  std::vector<Point<D>> probes;
  probes.reserve(n_probes);
  std::mt19937_64 rng(rng_seed);
  int64_t attempts = 0, max_attempts = 1000 * n_probes;
  while (static_cast<int64_t>(probes.size()) < n_probes && attempts < max_attempts) {
    ++attempts;
    Point<D> q = box.sample(rng);
    if (domain.contains(q)) probes.push_back(q);
  }
  if (probes.empty()) throw std::runtime_error("no probes fell inside the domain");

  std::vector<int> owner(probes.size());
  std::vector<double> dist(probes.size());
#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < static_cast<int64_t>(probes.size()); ++i) {
    auto [idx, d] = tree.nearest(probes[i]);
    owner[i] = idx;
    dist[i] = d;
  }
  std::vector<double> max_dist(n, 0.0);
  for (std::size_t i = 0; i < probes.size(); ++i)
    max_dist[owner[i]] = std::max(max_dist[owner[i]], dist[i]);

  double fill_max = 0;
  for (int64_t i = 0; i < n; ++i)
    fill_max = std::max(fill_max, 2.0 * max_dist[i] / checked_spacing(h, points[i]));

  rep.h_fill_norm = fill_max;
  rep.s_sep_norm = s_min;
  rep.gamma = fill_max / s_min;
}

template <int D>
QualityReport quasi_uniformity(std::span<const Point<D>> points, const Domain<D>& domain,
                               const SpacingFn<D>& h, int probe_density,
                               uint64_t rng_seed = 0x51A51A) {
  QualityReport rep;
  rep.n_points = points.size();
  quasi_uniformity(points, domain, h, probe_density, rep, rng_seed);
  return rep;
}

// All pairs violating ||p - q|| >= min(h(p), h(q)), with a small relative
// slack. Exact O(n^2) scan for n <= 2e4, radius queries above that.
template <int D>
std::vector<std::pair<int, int>> verify_min_spacing(std::span<const Point<D>> points,
                                                    const SpacingFn<D>& h) {
  const int64_t n = static_cast<int64_t>(points.size());
  std::vector<std::pair<int, int>> violations;
  if (n < 2) return violations;
  constexpr double kSlack = 1.0 - 1e-9;

  std::vector<double> hv(n);
#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < n; ++i) hv[i] = checked_spacing(h, points[i]);

  if (n <= 20000) {
#pragma omp parallel
    {
      std::vector<std::pair<int, int>> local;
#pragma omp for schedule(dynamic, 64)
      for (int64_t i = 0; i < n; ++i)
        for (int64_t j = i + 1; j < n; ++j) {
          double limit = std::min(hv[i], hv[j]) * kSlack;
          if (squared_distance(points[i], points[j]) < limit * limit)
            local.emplace_back(static_cast<int>(i), static_cast<int>(j));
        }
#pragma omp critical
      violations.insert(violations.end(), local.begin(), local.end());
    }
  } else {
    StaticKdTree<D> tree(std::vector<Point<D>>(points.begin(), points.end()));
#pragma omp parallel
    {
      std::vector<std::pair<int, int>> local;
      std::vector<int> near;
#pragma omp for schedule(dynamic, 256)
      for (int64_t i = 0; i < n; ++i) {
        tree.radius_ids(points[i], hv[i] * kSlack, near);
        for (int j : near) {
          if (j <= i) continue;
          double limit = std::min(hv[i], hv[j]) * kSlack;
          if (squared_distance(points[i], points[j]) < limit * limit)
            local.emplace_back(static_cast<int>(i), j);
        }
      }
#pragma omp critical
      violations.insert(violations.end(), local.begin(), local.end());
    }
  }
  std::sort(violations.begin(), violations.end());
  return violations;
}

}  // namespace frontfill
