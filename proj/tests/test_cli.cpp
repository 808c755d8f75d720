#include <doctest.h>

#include <cstdlib>
#include <string>

#include <nlohmann/json.hpp>

#include "frontfill/points_io.hpp"
#include "frontfill/quality.hpp"
#include "frontfill/spacing.hpp"
#include "test_util.hpp"

namespace {

int run(const std::string& args) {
  std::string cmd = std::string(FRONTFILL_BIN) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const char* kCloverConfig = R"({
  "dim": 2,
  "domain": {"kind": "clover"},
  "spacing": {"kind": "preset", "name": "clover2d", "h_s": 0.05},
  "seeds": "auto",
  "nc": 12,
  "threads": 2,
  "ns": 8,
  "rng_seed": 42
})";

}  // namespace

TEST_CASE("fill writes provenance columns and spacing-valid points") {
  testutil::TempDir tmp;
  testutil::write_file(tmp.file("c.json"), kCloverConfig);
  REQUIRE(run("fill --config " + tmp.file("c.json") + " --out " + tmp.file("pts.csv")) == 0);

  auto set = frontfill::read_points<2>(tmp.file("pts.csv"));
  CHECK(set.points.size() > 500);
  CHECK(set.seeds.size() >= 8);  // thread = -1 rows

  frontfill::PresetSpacing<2> h(frontfill::SpacingPreset::Clover2d, 0.05);
  auto pts = set.coords();
  CHECK(frontfill::verify_min_spacing<2>(pts, h).empty());

  // Stats JSON written next to the points.
  auto stats = nlohmann::json::parse(testutil::read_file(tmp.file("pts.stats.json")));
  CHECK(stats["points"].get<std::size_t>() == set.points.size());
  CHECK(stats["per_thread"].size() == 2);
}

TEST_CASE("single-thread fills are byte-identical") {
  testutil::TempDir tmp;
  testutil::write_file(tmp.file("c.json"), kCloverConfig);
  std::string common = "fill --config " + tmp.file("c.json") + " --threads 1 --out ";
  REQUIRE(run(common + tmp.file("a.csv")) == 0);
  REQUIRE(run(common + tmp.file("b.csv")) == 0);
  std::string a = testutil::read_file(tmp.file("a.csv"));
  CHECK(!a.empty());
  CHECK(a == testutil::read_file(tmp.file("b.csv")));

  // The sequential reference implementation is also reproducible.
  std::string seq = "fill --config " + tmp.file("c.json") + " --threads 1 --sequential --out ";
  REQUIRE(run(seq + tmp.file("s1.csv")) == 0);
  REQUIRE(run(seq + tmp.file("s2.csv")) == 0);
  CHECK(testutil::read_file(tmp.file("s1.csv")) == testutil::read_file(tmp.file("s2.csv")));
}

TEST_CASE("config errors exit with code 1 and name the field") {
  testutil::TempDir tmp;
  testutil::write_file(tmp.file("broken.json"), "{ not json");
  CHECK(run("fill --config " + tmp.file("broken.json")) == 1);

  testutil::write_file(tmp.file("nofield.json"), R"({"dim": 2, "spacing": {"kind": "constant",
    "h_s": 0.1}, "seeds": "auto"})");
  std::string cmd = std::string(FRONTFILL_BIN) + " fill --config " + tmp.file("nofield.json") +
                    " 2> " + tmp.file("err.txt");
  std::system(cmd.c_str());
  std::string err = testutil::read_file(tmp.file("err.txt"));
  CHECK(err.find("config.domain") != std::string::npos);

  testutil::write_file(tmp.file("badthreads.json"), R"({"dim": 2, "domain": {"kind": "clover"},
    "spacing": {"kind": "constant", "h_s": 0.1}, "seeds": "auto", "threads": 0})");
  CHECK(run("fill --config " + tmp.file("badthreads.json")) == 1);

  CHECK(run("fill --config " + tmp.file("missing.json")) == 1);
  CHECK(run("fill") == 1);                 // missing required option
  CHECK(run("fill --config x --threads 2 --sequential") == 1);
}

TEST_CASE("quality command reports gamma >= 1 and rejects k >= N") {
  testutil::TempDir tmp;
  testutil::write_file(tmp.file("c.json"), kCloverConfig);
  REQUIRE(run("fill --config " + tmp.file("c.json") + " --out " + tmp.file("pts.csv")) == 0);
  REQUIRE(run("quality --config " + tmp.file("c.json") + " --points " + tmp.file("pts.csv") +
              " --out " + tmp.file("q.json")) == 0);

  auto q = nlohmann::json::parse(testutil::read_file(tmp.file("q.json")));
  CHECK(q["gamma"].get<double>() >= 1.0);
  CHECK(q["k"].get<int>() == 5);
  uint64_t total = 0;
  for (auto c : q["histogram"]["counts"]) total += c.get<uint64_t>();
  CHECK(total == q["n_points"].get<uint64_t>() * 5);

  std::string hist = testutil::read_file(tmp.file("q_hist.csv"));
  CHECK(hist.rfind("bin_center,count\n", 0) == 0);

  CHECK(run("quality --config " + tmp.file("c.json") + " --points " + tmp.file("pts.csv") +
            " --k 100000 --out " + tmp.file("q2.json")) == 1);
}

TEST_CASE("bench command emits the pinned CSV") {
  testutil::TempDir tmp;
  testutil::write_file(tmp.file("c.json"), kCloverConfig);
  REQUIRE(run("bench --config " + tmp.file("c.json") +
              " --threads 1,2 --np 400 --repeats 1 --out " + tmp.file("b.csv")) == 0);
  std::string csv = testutil::read_file(tmp.file("b.csv"));
  CHECK(csv.rfind("threads,target_np,actual_np,wall_s,per_point_ns,speedup\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);  // header + baseline + 2 rows
  CHECK(csv.find("\n0,400,") != std::string::npos);      // sequential baseline row

  auto js = nlohmann::json::parse(testutil::read_file(tmp.file("b.json")));
  CHECK(js["rows"].size() == 3);

  CHECK(run("bench --config " + tmp.file("c.json") + " --np 400 --out " + tmp.file("x.csv")) ==
        1);  // empty thread list
}

TEST_CASE("solve command converges on the manufactured problem") {
  testutil::TempDir tmp;
  testutil::write_file(tmp.file("c.json"), R"({
    "dim": 2,
    "domain": {"kind": "clover"},
    "spacing": {"kind": "preset", "name": "clover2d", "h_s": 0.12},
    "seeds": "auto",
    "threads": 1,
    "rng_seed": 404
  })");
  REQUIRE(run("solve --config " + tmp.file("c.json") + " --refine 1,0.5 --out " +
              tmp.file("e.csv") + " --solutions " + tmp.file("sol")) == 0);

  std::string csv = testutil::read_file(tmp.file("e.csv"));
  REQUIRE(csv.rfind("N,e1,einf\n", 0) == 0);
  double e_first, e_second;
  long n_first, n_second;
  REQUIRE(std::sscanf(csv.c_str() + csv.find('\n') + 1, "%ld,%*[^,],%lf\n%ld,%*[^,],%lf",
                      &n_first, &e_first, &n_second, &e_second) == 4);
  CHECK(n_second > 2 * n_first);
  CHECK(e_second < e_first);  // refinement reduces the max error

  std::string sol = testutil::read_file(tmp.file("sol_0.csv"));
  CHECK(sol.rfind("x,y,u\n", 0) == 0);

  CHECK(run("solve --config " + tmp.file("c.json") + " --stencil 5 --out " + tmp.file("x.csv")) ==
        1);  // stencil too small for degree-2 augmentation
}

TEST_CASE("FRONTFILL_THREADS provides the default thread count") {
  testutil::TempDir tmp;
  testutil::write_file(tmp.file("c.json"), kCloverConfig);
  std::string cmd = "FRONTFILL_THREADS=3 " + std::string(FRONTFILL_BIN) + " fill --config " +
                    tmp.file("c.json") + " --out " + tmp.file("pts.csv") + " >/dev/null 2>&1";
  REQUIRE(std::system(cmd.c_str()) == 0);
  auto stats = nlohmann::json::parse(testutil::read_file(tmp.file("pts.stats.json")));
  CHECK(stats["threads"].get<int>() == 3);

  std::string bad = "FRONTFILL_THREADS=junk " + std::string(FRONTFILL_BIN) + " fill --config " +
                    tmp.file("c.json") + " >/dev/null 2>&1";
  int status = std::system(bad.c_str());
  CHECK(WEXITSTATUS(status) == 1);
}
