#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "frontfill/point.hpp"

namespace frontfill {

// Query results order by (distance, insertion index); the index breaks
// exact ties deterministically, matching the brute-force oracle used in
// the tests.
struct Hit {
  double d2 = std::numeric_limits<double>::infinity();
  int idx = std::numeric_limits<int>::max();

  bool operator<(const Hit& o) const { return d2 < o.d2 || (d2 == o.d2 && idx < o.idx); }
};

// Balanced k-d tree over a fixed point set, built once with median
// splits on the widest axis. Read-only after construction; concurrent
// queries need no synchronization.
template <int D>
class StaticKdTree {
 public:
  StaticKdTree() = default;

  explicit StaticKdTree(std::vector<Point<D>> points) : pts_(std::move(points)) {
    if (pts_.empty()) throw std::invalid_argument("cannot index an empty point set");
    perm_.resize(pts_.size());
    for (std::size_t i = 0; i < perm_.size(); ++i) perm_[i] = static_cast<int>(i);
    box_.lo = box_.hi = pts_[0];
    for (const Point<D>& p : pts_)
      for (int i = 0; i < D; ++i) {
        box_.lo.v[i] = std::min(box_.lo.v[i], p.v[i]);
        box_.hi.v[i] = std::max(box_.hi.v[i], p.v[i]);
      }
    nodes_.reserve(2 * pts_.size() / kLeafSize + 2);
    root_ = build(0, static_cast<int>(pts_.size()));
  }

  std::size_t size() const { return pts_.size(); }
  bool empty() const { return pts_.empty(); }
  const Point<D>& point(int i) const { return pts_[i]; }
  const std::vector<Point<D>>& points() const { return pts_; }

  // Exact nearest neighbour: (index, distance).
  std::pair<int, double> nearest(const Point<D>& q) const {
    require_nonempty();
    Hit best;
    nearest_into(q, best, 0, true);
    return {best.idx, std::sqrt(best.d2)};
  }

  // Folds this tree's nearest candidate into `best`, reporting indices
  // shifted by `idx_offset`. Inclusive mode recurses into exact ties so
  // the lowest index wins; strict mode only improves on best.d2, which is
  // what a radius test needs.
  void nearest_into(const Point<D>& q, Hit& best, int idx_offset, bool inclusive) const {
    double entry = box_distance2(q, box_);
    if (inclusive ? entry <= best.d2 : entry < best.d2)
      nearest_rec(root_, q, best, idx_offset, inclusive);
  }

  const Aabb<D>& bounds() const { return box_; }

  // Exact k nearest, ascending by (distance, index). The out-parameter
  // form reuses the caller's buffers across queries.
  void knn(const Point<D>& q, int k, std::vector<std::pair<int, double>>& out,
           std::vector<Hit>& heap) const {
    require_nonempty();
    if (k < 1) throw std::invalid_argument("k must be positive");
    if (static_cast<std::size_t>(k) > pts_.size())
      throw std::invalid_argument("k exceeds the number of indexed points");
    heap.clear();
    knn_rec(root_, q, k, heap);
    std::sort_heap(heap.begin(), heap.end());
    out.clear();
    for (const Hit& h : heap) out.emplace_back(h.idx, std::sqrt(h.d2));
  }

  std::vector<std::pair<int, double>> knn(const Point<D>& q, int k) const {
    std::vector<std::pair<int, double>> out;
    std::vector<Hit> heap;
    knn(q, k, out, heap);
    return out;
  }

  // All indices within distance r (inclusive), ascending by index.
  void radius_ids(const Point<D>& q, double r, std::vector<int>& out) const {
    require_nonempty();
    out.clear();
    radius_rec(root_, q, r * r, out);
    std::sort(out.begin(), out.end());
  }

 private:
  static constexpr int kLeafSize = 12;

  struct Node {
    double split = 0;
    int axis = -1;  // -1 marks a leaf
    int left = -1, right = -1;
    int begin = 0, end = 0;  // leaf range into perm_
  };

  std::vector<Point<D>> pts_;
  std::vector<int> perm_;
  std::vector<Node> nodes_;
  Aabb<D> box_{};
  int root_ = -1;

  void require_nonempty() const {
    if (pts_.empty()) throw std::logic_error("query on an empty index");
  }

  static double box_distance2(const Point<D>& q, const Aabb<D>& box) {
    double d2 = 0;
    for (int i = 0; i < D; ++i) {
      double d = q.v[i] < box.lo.v[i] ? box.lo.v[i] - q.v[i]
                 : q.v[i] > box.hi.v[i] ? q.v[i] - box.hi.v[i]
                                        : 0.0;
      d2 += d * d;
    }
    return d2;
  }

  int build(int begin, int end) {
    int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    if (end - begin <= kLeafSize) {
      nodes_[id].begin = begin;
      nodes_[id].end = end;
      return id;
    }
    // Split the widest extent.
    Point<D> lo = pts_[perm_[begin]], hi = lo;
    for (int i = begin + 1; i < end; ++i) {
      const Point<D>& p = pts_[perm_[i]];
      for (int a = 0; a < D; ++a) {
        lo.v[a] = std::min(lo.v[a], p.v[a]);
        hi.v[a] = std::max(hi.v[a], p.v[a]);
      }
    }
    int axis = 0;
    for (int a = 1; a < D; ++a)
      if (hi.v[a] - lo.v[a] > hi.v[axis] - lo.v[axis]) axis = a;

    int mid = begin + (end - begin) / 2;
    std::nth_element(perm_.begin() + begin, perm_.begin() + mid, perm_.begin() + end,
                     [&](int a, int b) { return pts_[a].v[axis] < pts_[b].v[axis]; });
    double split = pts_[perm_[mid]].v[axis];
    int left = build(begin, mid);
    int right = build(mid, end);
    nodes_[id].axis = axis;
    nodes_[id].split = split;
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
  }

  void nearest_rec(int id, const Point<D>& q, Hit& best, int off, bool inclusive) const {
    const Node& n = nodes_[id];
    if (n.axis < 0) {
      for (int i = n.begin; i < n.end; ++i) {
        double d2 = squared_distance(q, pts_[perm_[i]]);
        Hit h{d2, off + perm_[i]};
        if (inclusive ? h < best : d2 < best.d2) best = h;
      }
      return;
    }
    double delta = q.v[n.axis] - n.split;
    int near = delta < 0 ? n.left : n.right;
    int far = delta < 0 ? n.right : n.left;
    nearest_rec(near, q, best, off, inclusive);
    if (inclusive ? delta * delta <= best.d2 : delta * delta < best.d2)
      nearest_rec(far, q, best, off, inclusive);
  }

  void knn_rec(int id, const Point<D>& q, int k, std::vector<Hit>& heap) const {
    const Node& n = nodes_[id];
    if (n.axis < 0) {
      for (int i = n.begin; i < n.end; ++i) {
        Hit h{squared_distance(q, pts_[perm_[i]]), perm_[i]};
        if (static_cast<int>(heap.size()) < k) {
          heap.push_back(h);
          std::push_heap(heap.begin(), heap.end());
        } else if (h < heap.front()) {
          std::pop_heap(heap.begin(), heap.end());
          heap.back() = h;
          std::push_heap(heap.begin(), heap.end());
        }
      }
      return;
    }
    double delta = q.v[n.axis] - n.split;
    int near = delta < 0 ? n.left : n.right;
    int far = delta < 0 ? n.right : n.left;
    knn_rec(near, q, k, heap);
    if (static_cast<int>(heap.size()) < k || delta * delta <= heap.front().d2)
      knn_rec(far, q, k, heap);
  }

  void radius_rec(int id, const Point<D>& q, double r2, std::vector<int>& out) const {
    const Node& n = nodes_[id];
    if (n.axis < 0) {
      for (int i = n.begin; i < n.end; ++i)
        if (squared_distance(q, pts_[perm_[i]]) <= r2) out.push_back(perm_[i]);
      return;
    }
    double delta = q.v[n.axis] - n.split;
    if (delta < 0 || delta * delta <= r2) radius_rec(n.left, q, r2, out);
    if (delta >= 0 || delta * delta <= r2) radius_rec(n.right, q, r2, out);
  }
};

// Insert-capable index as a logarithmic forest of static trees
// (Bentley-Saxe): bucket i, when occupied, holds a balanced tree over a
// contiguous run of 2^i recently inserted points. An insertion rebuilds
// the smallest empty bucket from the buckets below it, so every point is
// re-indexed O(log n) times and no tree is ever rebalanced in place.
// Plain leaf-insertion trees degrade to hundred-fold depths under the
// spatially correlated insertion order of an advancing front; the forest
// keeps queries logarithmic. Query ties break on the global insertion
// index.
template <int D>
class DynamicKdTree {
 public:
  void insert(const Point<D>& p) {
    pts_.push_back(p);
    std::size_t bucket = 0;
    while (bucket < trees_.size() && trees_[bucket].live) ++bucket;
    if (bucket == trees_.size()) trees_.emplace_back();
    std::size_t count = std::size_t(1) << bucket;  // merges everything below
    std::size_t begin = pts_.size() - count;
    trees_[bucket].live = true;
    trees_[bucket].begin = static_cast<int>(begin);
    trees_[bucket].tree =
        StaticKdTree<D>(std::vector<Point<D>>(pts_.begin() + begin, pts_.end()));
    for (std::size_t b = 0; b < bucket; ++b) trees_[b] = Bucket{};
  }

  std::size_t size() const { return pts_.size(); }
  bool empty() const { return pts_.empty(); }
  const Point<D>& point(int i) const { return pts_[i]; }

  std::pair<int, double> nearest(const Point<D>& q) const {
    if (empty()) throw std::logic_error("query on an empty index");
    Hit best;
    for (auto it = trees_.rbegin(); it != trees_.rend(); ++it)
      if (it->live) it->tree.nearest_into(q, best, it->begin, true);
    return {best.idx, std::sqrt(best.d2)};
  }

  // Closest point strictly within r, or {-1, +inf} when none exists.
  std::pair<int, double> nearest_within(const Point<D>& q, double r) const {
    Hit best;
    best.d2 = r * r;
    best.idx = -1;
    for (auto it = trees_.rbegin(); it != trees_.rend(); ++it)
      if (it->live) it->tree.nearest_into(q, best, it->begin, false);
    if (best.idx < 0) return {-1, std::numeric_limits<double>::infinity()};
    return {best.idx, std::sqrt(best.d2)};
  }

 private:
  struct Bucket {
    bool live = false;
    int begin = 0;  // global id of the bucket's first point
    StaticKdTree<D> tree;
  };

  std::vector<Point<D>> pts_;  // insertion order
  std::vector<Bucket> trees_;
};

}  // namespace frontfill
