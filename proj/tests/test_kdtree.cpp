#include <doctest.h>

#include <random>

#include "frontfill/kdtree.hpp"
#include "test_util.hpp"

using namespace frontfill;
using testutil::brute_knn;
using testutil::brute_nearest;
using testutil::random_points;

TEST_CASE("static tree basics") {
  StaticKdTree<2> one(std::vector<Point<2>>{{{0, 0}}});
  CHECK(one.size() == 1);
  CHECK(one.nearest({{5, 5}}).first == 0);

  CHECK_THROWS_AS(StaticKdTree<2>(std::vector<Point<2>>{}), std::invalid_argument);

  StaticKdTree<2> two(std::vector<Point<2>>{{{0, 0}}, {{3, 0}}});
  auto [idx, dist] = two.nearest({{1, 0}});
  CHECK(idx == 0);
  CHECK(dist == doctest::Approx(1.0));
  // Exact tie: lowest insertion index wins.
  CHECK(two.nearest({{1.5, 0}}).first == 0);

  // Duplicates are allowed; a member query returns distance 0.
  StaticKdTree<2> dup(std::vector<Point<2>>{{{1, 1}}, {{1, 1}}, {{2, 2}}});
  auto hit = dup.nearest({{1, 1}});
  CHECK(hit.first == 0);
  CHECK(hit.second == 0.0);
}

TEST_CASE("knn on the 3x3 grid") {
  std::vector<Point<2>> grid;
  for (int y = 0; y < 3; ++y)
    for (int x = 0; x < 3; ++x) grid.push_back({{double(x), double(y)}});
  StaticKdTree<2> tree(grid);
  auto hits = tree.knn({{1, 1}}, 5);
  REQUIRE(hits.size() == 5);
  CHECK(hits[0].second == 0.0);  // the center itself
  for (int i = 1; i < 5; ++i) CHECK(hits[i].second == doctest::Approx(1.0));

  CHECK(tree.knn({{1, 1}}, 9).size() == 9);  // k == size returns all
  CHECK_THROWS_AS(tree.knn({{1, 1}}, 10), std::invalid_argument);
  CHECK_THROWS_AS(tree.knn({{1, 1}}, 0), std::invalid_argument);
}

TEST_CASE("static queries match the linear-scan oracle") {
  std::mt19937_64 rng(1234);
  auto run = [&](auto dim_tag) {
    constexpr int D = decltype(dim_tag)::value;
    // Snap to a coarse grid so exact distance ties actually occur.
    auto pts = random_points<D>(rng, 1000);
    for (auto& p : pts)
      for (int d = 0; d < D; ++d) p.v[d] = std::round(p.v[d] * 8) / 8;
    StaticKdTree<D> tree(pts);
    for (int i = 0; i < 1000; ++i) {
      auto q = random_points<D>(rng, 1)[0];
      for (int d = 0; d < D; ++d) q.v[d] = std::round(q.v[d] * 8) / 8;

      auto got = tree.nearest(q);
      auto want = brute_nearest<D>(pts, q);
      CHECK(got.first == want.first);
      CHECK(got.second == want.second);

      int k = 1 + static_cast<int>(i % 17);
      auto got_k = tree.knn(q, k);
      auto want_k = brute_knn<D>(pts, q, k);
      REQUIRE(got_k.size() == want_k.size());
      for (std::size_t j = 0; j < got_k.size(); ++j) {
        CHECK(got_k[j].first == want_k[j].first);
        CHECK(got_k[j].second == want_k[j].second);
      }
    }
  };
  run(std::integral_constant<int, 1>{});
  run(std::integral_constant<int, 2>{});
  run(std::integral_constant<int, 3>{});
}

TEST_CASE("radius queries match the oracle") {
  std::mt19937_64 rng(4321);
  auto pts = random_points<2>(rng, 800);
  StaticKdTree<2> tree(pts);
  std::vector<int> got;
  for (int i = 0; i < 200; ++i) {
    auto q = random_points<2>(rng, 1)[0];
    double r = std::uniform_real_distribution<double>(0.01, 1.0)(rng);
    tree.radius_ids(q, r, got);
    std::vector<int> want;
    for (std::size_t j = 0; j < pts.size(); ++j)
      if (distance(pts[j], q) <= r) want.push_back(static_cast<int>(j));
    CHECK(got == want);
  }
}

TEST_CASE("dynamic tree matches the oracle under incremental growth") {
  std::mt19937_64 rng(99);
  auto pts = random_points<2>(rng, 600);
  DynamicKdTree<2> tree;
  std::vector<Point<2>> sofar;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    tree.insert(pts[i]);
    sofar.push_back(pts[i]);
    if (i % 37 == 0) {
      for (int j = 0; j < 20; ++j) {
        auto q = random_points<2>(rng, 1)[0];
        auto got = tree.nearest(q);
        auto want = brute_nearest<2>(sofar, q);
        CHECK(got.first == want.first);
        CHECK(got.second == want.second);
      }
    }
  }
}

TEST_CASE("nearest_within uses a strict radius") {
  DynamicKdTree<2> tree;
  tree.insert({{0, 0}});
  CHECK(tree.nearest_within({{1, 0}}, 1.0).first == -1);  // exactly r: not a blocker
  CHECK(tree.nearest_within({{1, 0}}, 1.0 + 1e-9).first == 0);
  CHECK(tree.nearest_within({{0.5, 0}}, 1.0).second == doctest::Approx(0.5));
  DynamicKdTree<2> empty;
  CHECK(empty.nearest_within({{0, 0}}, 1.0).first == -1);
}

TEST_CASE("dynamic tree handles 3-D and duplicate coordinates") {
  std::mt19937_64 rng(7);
  DynamicKdTree<3> tree;
  std::vector<Point<3>> pts;
  for (int i = 0; i < 300; ++i) {
    auto p = random_points<3>(rng, 1)[0];
    for (int d = 0; d < 3; ++d) p.v[d] = std::round(p.v[d] * 4) / 4;
    tree.insert(p);
    pts.push_back(p);
  }
  for (int i = 0; i < 200; ++i) {
    auto q = random_points<3>(rng, 1)[0];
    auto got = tree.nearest(q);
    auto want = brute_nearest<3>(pts, q);
    CHECK(got.first == want.first);
    CHECK(got.second == want.second);
  }
}
