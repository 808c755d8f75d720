#pragma once

#include <atomic>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <vector>

#include "frontfill/kdtree.hpp"
#include "frontfill/point.hpp"

namespace frontfill {

// Two-level concurrent spatial index. The top level is a read-only tree
// over the seed points; each seed defines a cell holding the points
// closer to it than to any other seed, stored in a dynamically grown
// sub-index behind a per-cell readers-writer lock.
//
// guarded_try_place is the only mutating entry point and is safe for
// arbitrary concurrent callers. flatten requires quiescence (no in-flight
// placements), which the fill orchestrator establishes by joining its
// workers first.
template <int D>
class TwoLevelIndex {
 public:
  struct PlaceResult {
    bool accepted = false;
    int cell = -1;            // home cell on acceptance
    double blocker_dist = 0;  // distance to the closest blocker on rejection
  };

  // Reusable per-caller scratch, so the hot path does not allocate.
  struct Scratch {
    std::vector<int> cells;
  };

  explicit TwoLevelIndex(std::vector<Point<D>> seeds)
      : top_(std::move(seeds)), cells_(new Cell[top_.size()]) {}

  std::size_t cell_count() const { return top_.size(); }
  std::size_t cell_size(int i) const { return cells_[i].tree.size(); }
  std::size_t total_size() const {
    std::size_t n = top_.size();
    for (std::size_t i = 0; i < top_.size(); ++i) n += cells_[i].tree.size();
    return n;
  }
  const StaticKdTree<D>& top() const { return top_; }

  // Number of lock acquisitions that had to wait for another thread.
  uint64_t contended_acquisitions() const { return contended_.load(std::memory_order_relaxed); }

  // Every cell whose seed lies within d1 + 2r of c, where d1 is the
  // distance to the nearest seed: a superset of the cells that can hold a
  // point within r of c, ascending by id.
  void involved_cells(const Point<D>& c, double r, std::vector<int>& out) const {
    auto [nn, d1] = top_.nearest(c);
    (void)nn;
    top_.radius_ids(c, (d1 + 2.0 * r) * (1.0 + 1e-12), out);
  }

  std::vector<int> involved_cells(const Point<D>& c, double r) const {
    std::vector<int> out;
    involved_cells(c, r, out);
    return out;
  }

  // Atomic proximity check plus insertion: locks every involved cell in
  // ascending id order, rejects if any stored point (or seed) is strictly
  // closer than r, otherwise inserts c into the cell of its nearest seed.
  // Locks are released in reverse order either way. Rejection is a normal
  // outcome, not an error.
  PlaceResult guarded_try_place(const Point<D>& c, double r, Scratch& scratch) {
    auto [nn, d1] = top_.nearest(c);
    if (d1 < r) return {false, -1, d1};

    top_.radius_ids(c, (d1 + 2.0 * r) * (1.0 + 1e-12), scratch.cells);
    const std::vector<int>& ids = scratch.cells;
    for (std::size_t i = 1; i < ids.size(); ++i)
      if (ids[i] <= ids[i - 1]) throw std::logic_error("cell lock order violated");

    LockSet locks(*this, ids);
    double blocker = std::numeric_limits<double>::infinity();
    for (int id : ids) {
      auto [idx, dist] = cells_[id].tree.nearest_within(c, r);
      if (idx >= 0) blocker = std::min(blocker, dist);
    }
    if (blocker < r) return {false, -1, blocker};
    cells_[nn].tree.insert(c);
    return {true, nn, 0.0};
  }

  PlaceResult guarded_try_place(const Point<D>& c, double r) {
    Scratch scratch;
    return guarded_try_place(c, r, scratch);
  }

  // Inserts without any proximity check, into the cell of the nearest
  // seed. Meant for pre-existing points (boundary nodes) loaded before
  // the parallel phase starts; takes the cell lock anyway.
  void insert_unchecked(const Point<D>& c) {
    auto [nn, d1] = top_.nearest(c);
    (void)d1;
    std::unique_lock lock(cells_[nn].guard);
    cells_[nn].tree.insert(c);
  }

  // Union of the seeds and all cell contents as a flat static index;
  // seeds come first, then cells in id order with their insertion order
  // preserved. Callers must guarantee there are no concurrent writers.
  StaticKdTree<D> flatten() const {
    std::vector<Point<D>> all(top_.points());
    all.reserve(total_size());
    for (std::size_t i = 0; i < top_.size(); ++i)
      for (std::size_t j = 0; j < cells_[i].tree.size(); ++j)
        all.push_back(cells_[i].tree.point(static_cast<int>(j)));
    return StaticKdTree<D>(std::move(all));
  }

 private:
  struct Cell {
    DynamicKdTree<D> tree;
    std::shared_mutex guard;
  };

  // Locks the given cells in ascending order on construction, unlocks in
  // reverse on destruction.
  class LockSet {
   public:
    LockSet(TwoLevelIndex& owner, const std::vector<int>& ids) : owner_(owner), ids_(ids) {
      for (int id : ids_) {
        std::shared_mutex& m = owner_.cells_[id].guard;
        if (!m.try_lock()) {
          owner_.contended_.fetch_add(1, std::memory_order_relaxed);
          m.lock();
        }
      }
    }
    ~LockSet() {
      for (auto it = ids_.rbegin(); it != ids_.rend(); ++it)
        owner_.cells_[*it].guard.unlock();
    }

   private:
    TwoLevelIndex& owner_;
    const std::vector<int>& ids_;
  };

  StaticKdTree<D> top_;
  std::unique_ptr<Cell[]> cells_;
  std::atomic<uint64_t> contended_{0};
};

}  // namespace frontfill
