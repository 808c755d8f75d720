#include <doctest.h>

#include <omp.h>

#include <random>

#include "frontfill/two_level_index.hpp"
#include "test_util.hpp"

using namespace frontfill;

TEST_CASE("involved_cells matches the triangle-inequality bound") {
  TwoLevelIndex<2> tl({{{0, 0}}, {{10, 0}}});
  CHECK(tl.involved_cells({{1, 0}}, 0.5) == std::vector<int>{0});
  CHECK(tl.involved_cells({{5, 0}}, 0.5) == std::vector<int>{0, 1});

  TwoLevelIndex<2> single(std::vector<Point<2>>{{{2, 2}}});
  CHECK(single.involved_cells({{-3, 7}}, 0.1) == std::vector<int>{0});
  CHECK(single.involved_cells({{2, 2}}, 5.0) == std::vector<int>{0});
}

TEST_CASE("involved_cells is sound: stored points within r always covered") {
  std::mt19937_64 rng(55);
  auto seeds = testutil::random_points<2>(rng, 24, 0, 1);
  TwoLevelIndex<2> tl(seeds);

  // Place points with a tiny radius so most insertions succeed, keeping
  // track of each point's home cell.
  std::vector<std::pair<Point<2>, int>> stored;
  for (int i = 0; i < 4000; ++i) {
    auto p = testutil::random_points<2>(rng, 1, 0, 1)[0];
    auto res = tl.guarded_try_place(p, 1e-4);
    if (res.accepted) stored.emplace_back(p, res.cell);
  }
  REQUIRE(stored.size() > 3000);

  for (int i = 0; i < 2000; ++i) {
    auto c = testutil::random_points<2>(rng, 1, 0, 1)[0];
    double r = std::uniform_real_distribution<double>(0.01, 0.3)(rng);
    auto involved = tl.involved_cells(c, r);
    for (const auto& [q, cell] : stored) {
      if (distance(q, c) >= r) continue;
      CHECK(std::find(involved.begin(), involved.end(), cell) != involved.end());
    }
  }
}

TEST_CASE("guarded_try_place accepts into the nearest cell and rejects blockers") {
  TwoLevelIndex<2> tl({{{0, 0}}, {{10, 0}}});

  auto res = tl.guarded_try_place({{8, 1}}, 0.5);
  CHECK(res.accepted);
  CHECK(res.cell == 1);
  CHECK(tl.cell_size(1) == 1);

  // A stored point at distance 0.45 = 0.9 r blocks.
  auto blocked = tl.guarded_try_place({{8.45, 1}}, 0.5);
  CHECK_FALSE(blocked.accepted);
  CHECK(blocked.blocker_dist == doctest::Approx(0.45));

  // The seed itself blocks when closer than r.
  auto near_seed = tl.guarded_try_place({{0.1, 0}}, 0.5);
  CHECK_FALSE(near_seed.accepted);
  CHECK(near_seed.blocker_dist == doctest::Approx(0.1));
}

TEST_CASE("flatten unions seeds with all cell contents") {
  std::mt19937_64 rng(66);
  auto seeds = testutil::random_points<2>(rng, 8, 0, 1);
  TwoLevelIndex<2> tl(seeds);
  CHECK(tl.flatten().size() == 8);  // seeds only

  std::vector<Point<2>> everything = seeds;
  std::size_t accepted = 0;
  for (int i = 0; i < 500; ++i) {
    auto p = testutil::random_points<2>(rng, 1, 0, 1)[0];
    if (tl.guarded_try_place(p, 0.01).accepted) {
      everything.push_back(p);
      ++accepted;
    }
  }
  std::size_t cells_total = 0;
  for (std::size_t i = 0; i < tl.cell_count(); ++i) cells_total += tl.cell_size(i);
  CHECK(cells_total == accepted);

  StaticKdTree<2> flat = tl.flatten();
  CHECK(flat.size() == seeds.size() + accepted);
  for (int i = 0; i < 300; ++i) {
    auto q = testutil::random_points<2>(rng, 1, 0, 1)[0];
    auto want = testutil::brute_nearest<2>(everything, q);
    CHECK(flat.nearest(q).second == want.second);
  }
}

TEST_CASE("conflicting pairs across a cell border never both land") {
  // Two threads hammer the same near-border conflicting pair; whatever
  // interleaving happens, the stored set must stay r-separated.
  for (int round = 0; round < 20; ++round) {
    TwoLevelIndex<2> tl({{{0, 0}}, {{1, 0}}});
    const double r = 0.02;
    std::mt19937_64 seeder(round);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    const uint64_t s0 = seeder(), s1 = seeder();

#pragma omp parallel num_threads(2)
    {
      int tid = omp_get_thread_num();
      std::mt19937_64 rng(tid == 0 ? s0 : s1);
      std::uniform_real_distribution<double> dist(0.0, 1.0);
      TwoLevelIndex<2>::Scratch scratch;
      for (int i = 0; i < 2000; ++i) {
        double y = dist(rng);
        double dx = 0.4 * r * dist(rng);
        // Each thread pushes its half of a conflicting pair.
        Point<2> p{{tid == 0 ? 0.5 - dx : 0.5 + dx, y}};
        tl.guarded_try_place(p, r, scratch);
      }
    }

    auto flat = tl.flatten();
    std::vector<Point<2>> pts(flat.points().begin() + 2, flat.points().end());
    std::vector<double> h(pts.size(), r);
    auto bad = testutil::brute_spacing_violations<2>(pts, h, 1.0 - 1e-12);
    CHECK(bad.empty());
    (void)ud;
  }
}

TEST_CASE("16-thread stress keeps the r-separation invariant") {
  std::mt19937_64 seed_rng(5);
  TwoLevelIndex<2> tl(testutil::random_points<2>(seed_rng, 25, 0, 1));
  const double r = 0.015;
#pragma omp parallel num_threads(16)
  {
    std::mt19937_64 rng(1000 + omp_get_thread_num());
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    TwoLevelIndex<2>::Scratch scratch;
    for (int i = 0; i < 3000; ++i) {
      Point<2> p{{dist(rng), dist(rng)}};
      tl.guarded_try_place(p, r, scratch);
    }
  }
  auto flat = tl.flatten();
  std::vector<Point<2>> pts(flat.points().begin() + 25, flat.points().end());
  std::vector<double> h(pts.size(), r);
  CHECK(testutil::brute_spacing_violations<2>(pts, h, 1.0 - 1e-12).empty());
}

TEST_CASE("expansions in disjoint cells do not contend") {
  TwoLevelIndex<2> tl({{{0, 0}}, {{100, 0}}});
#pragma omp parallel num_threads(2)
  {
    int tid = omp_get_thread_num();
    std::mt19937_64 rng(tid);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    TwoLevelIndex<2>::Scratch scratch;
    double cx = tid == 0 ? 0.0 : 100.0;
    for (int i = 0; i < 5000; ++i) {
      Point<2> p{{cx + dist(rng), dist(rng)}};
      tl.guarded_try_place(p, 1e-3, scratch);
    }
  }
  CHECK(tl.contended_acquisitions() == 0);
}
