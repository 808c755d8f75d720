#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "frontfill/domain.hpp"
#include "frontfill/fill.hpp"
#include "frontfill/spacing.hpp"

namespace frontfill {

// Schema violation in a run configuration; the message names the
// offending field path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <int D>
struct Problem {
  std::unique_ptr<Domain<D>> domain;
  std::unique_ptr<SpacingFn<D>> spacing;
  std::vector<Point<D>> seeds;  // resolved; "auto" becomes the bbox center
};

// Command-line overrides applied on top of the config file.
struct Overrides {
  std::optional<int> threads;
  std::optional<int> n_c;
  std::optional<int> n_s;
  std::optional<int64_t> target_np;
  std::optional<uint64_t> rng_seed;
};

struct RunConfig {
  int dim = 0;
  FillConfig fill;
  Problem<1> p1;
  Problem<2> p2;
  Problem<3> p3;

  template <int D>
  Problem<D>& problem() {
    if constexpr (D == 1) return p1;
    else if constexpr (D == 2) return p2;
    else return p3;
  }
  template <int D>
  const Problem<D>& problem() const {
    return const_cast<RunConfig*>(this)->problem<D>();
  }
};

// Parses and validates a JSON run configuration. Relative file paths
// inside the config (polygon CSV, meshes) resolve against the config
// file's directory.
RunConfig load_run_config(const std::string& path, const Overrides& overrides = {});
RunConfig parse_run_config(const std::string& json_text, const Overrides& overrides = {},
                           const std::string& base_dir = ".");

}  // namespace frontfill
