#include "frontfill/bench.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace frontfill {

namespace {
std::string fmt(const char* format, double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}
}  // namespace

std::string bench_csv(const BenchReport& report) {
  std::string out = "threads,target_np,actual_np,wall_s,per_point_ns,speedup\n";
  for (const BenchRow& r : report.rows) {
    out += std::to_string(r.threads) + ',' + std::to_string(r.target_np) + ',' +
           std::to_string(r.actual_np) + ',' + fmt("%.6f", r.wall_s) + ',' +
           fmt("%.2f", r.per_point_ns) + ',' + fmt("%.4f", r.speedup) + '\n';
  }
  return out;
}

void write_bench_csv(const BenchReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << bench_csv(report);
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

std::string bench_json(const BenchReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const BenchRow& r : report.rows) {
    rows.push_back({{"threads", r.threads},
                    {"target_np", r.target_np},
                    {"actual_np", r.actual_np},
                    {"wall_s", r.wall_s},
                    {"per_point_ns", r.per_point_ns},
                    {"speedup", r.speedup},
                    {"thread_busy_s", r.thread_busy_s}});
  }
  return nlohmann::json{{"rows", rows}}.dump(2) + "\n";
}

void write_bench_json(const BenchReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << bench_json(report);
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

std::vector<std::string> speedup_table(const BenchReport& report) {
  std::map<int64_t, double> baseline;
  for (const BenchRow& r : report.rows)
    if (r.threads == 0) baseline[r.target_np] = r.per_point_ns;

  std::vector<std::string> rows;
  for (const BenchRow& r : report.rows) {
    auto it = baseline.find(r.target_np);
    if (it == baseline.end())
      throw std::runtime_error("missing sequential baseline row for target " +
                               std::to_string(r.target_np));
    double speedup = r.threads == 0 ? 1.0 : it->second / r.per_point_ns;
    rows.push_back(std::to_string(r.threads) + ',' + std::to_string(r.target_np) + ',' +
                   fmt("%.4f", speedup));
  }
  return rows;
}

}  // namespace frontfill
