#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "frontfill/config.hpp"

namespace frontfill {

// File-level command implementations behind the CLI subcommands. All of
// them throw ConfigError for usage/schema problems and std::runtime_error
// for runtime/numeric failures; the CLI maps those to exit codes 1 and 2.

struct FillOptions {
  Overrides overrides;
  bool sequential = false;  // requires threads == 1
};

// Runs the fill and writes the points CSV (rows sorted by insertion
// order) plus a stats JSON next to it.
void cmd_fill(const std::string& config_path, const FillOptions& opts,
              const std::string& points_out, const std::string& stats_out);

// Quality report for a previously written point set: JSON report plus a
// two-column "bin_center,count" histogram CSV.
void cmd_quality(const std::string& config_path, const std::string& points_path, int k,
                 int probe_density, int bins, const std::string& report_out,
                 const std::string& hist_out);

// Timing sweep over thread counts and target sizes; writes the bench CSV
// and its JSON variant (with per-thread times).
void cmd_bench(const std::string& config_path, const Overrides& overrides,
               const std::vector<int>& threads, const std::vector<int64_t>& np_targets,
               int repeats, const std::string& csv_out, const std::string& json_out);

// Manufactured Poisson validation on a 2-D config: for each refinement
// scale, samples the boundary, fills the interior, solves, and appends an
// "N,e1,einf" row. Optionally writes per-refinement solution CSVs.
void cmd_solve(const std::string& config_path, const Overrides& overrides, int stencil_size,
               const std::vector<double>& refinements, const std::string& errors_out,
               const std::string& solution_prefix);

}  // namespace frontfill
