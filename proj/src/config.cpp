#include "frontfill/config.hpp"

#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

namespace frontfill {

namespace {

using nlohmann::json;

std::string join(const std::string& path, const char* key) {
  return path.empty() ? std::string("config.") + key : "config." + path + "." + key;
}

const json& require(const json& j, const char* key, const std::string& path) {
  if (!j.is_object())
    throw ConfigError((path.empty() ? "config" : "config." + path) + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(join(path, key) + ": missing");
  return *it;
}

double require_number(const json& j, const char* key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_number()) throw ConfigError(join(path, key) + ": expected a number");
  return v.get<double>();
}

std::string require_string(const json& j, const char* key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_string()) throw ConfigError(join(path, key) + ": expected a string");
  return v.get<std::string>();
}

template <int D>
Point<D> parse_point(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != D)
    throw ConfigError("config." + path + ": expected an array of " + std::to_string(D) +
                      " numbers");
  Point<D> p;
  for (int i = 0; i < D; ++i) {
    if (!v[i].is_number()) throw ConfigError("config." + path + ": expected numbers");
    p.v[i] = v[i].get<double>();
  }
  return p;
}

std::string resolve(const std::string& base_dir, const std::string& rel) {
  std::filesystem::path p(rel);
  if (p.is_absolute()) return rel;
  return (std::filesystem::path(base_dir) / p).string();
}

template <int D>
std::unique_ptr<Domain<D>> parse_domain(const json& dom, const std::string& base_dir);

template <>
std::unique_ptr<Domain<1>> parse_domain<1>(const json& dom, const std::string&) {
  std::string kind = require_string(dom, "kind", "domain");
  if (kind == "box") {
    Aabb<1> box{parse_point<1>(require(dom, "lo", "domain"), "domain.lo"),
                parse_point<1>(require(dom, "hi", "domain"), "domain.hi")};
    return std::make_unique<Box<1>>(box);
  }
  throw ConfigError("config.domain.kind: '" + kind + "' is not available in 1-D (use 'box')");
}

template <>
std::unique_ptr<Domain<2>> parse_domain<2>(const json& dom, const std::string& base_dir) {
  std::string kind = require_string(dom, "kind", "domain");
  if (kind == "clover") return std::make_unique<StarPolar2D>(make_clover2d());
  if (kind == "box") {
    Aabb<2> box{parse_point<2>(require(dom, "lo", "domain"), "domain.lo"),
                parse_point<2>(require(dom, "hi", "domain"), "domain.hi")};
    return std::make_unique<Box<2>>(box);
  }
  if (kind == "polygon") {
    if (dom.contains("csv"))
      return std::make_unique<Polygon2D>(
          Polygon2D::load_csv(resolve(base_dir, require_string(dom, "csv", "domain"))));
    const json& verts = require(dom, "vertices", "domain");
    if (!verts.is_array()) throw ConfigError("config.domain.vertices: expected an array");
    std::vector<Point<2>> pts;
    for (std::size_t i = 0; i < verts.size(); ++i)
      pts.push_back(parse_point<2>(verts[i], "domain.vertices[" + std::to_string(i) + "]"));
    return std::make_unique<Polygon2D>(std::move(pts));
  }
  throw ConfigError("config.domain.kind: unknown 2-D domain '" + kind +
                    "' (want clover, box or polygon)");
}

template <>
std::unique_ptr<Domain<3>> parse_domain<3>(const json& dom, const std::string& base_dir) {
  std::string kind = require_string(dom, "kind", "domain");
  if (kind == "clover") return std::make_unique<StarSpherical3D>(make_clover3d());
  if (kind == "box") {
    Aabb<3> box{parse_point<3>(require(dom, "lo", "domain"), "domain.lo"),
                parse_point<3>(require(dom, "hi", "domain"), "domain.hi")};
    return std::make_unique<Box<3>>(box);
  }
  if (kind == "mesh")
    return std::make_unique<TriMesh3D>(
        TriMesh3D::load_file(resolve(base_dir, require_string(dom, "path", "domain"))));
  throw ConfigError("config.domain.kind: unknown 3-D domain '" + kind +
                    "' (want clover, box or mesh)");
}

template <int D>
std::unique_ptr<SpacingFn<D>> parse_spacing(const json& sp) {
  std::string kind = require_string(sp, "kind", "spacing");
  double h_s = require_number(sp, "h_s", "spacing");
  try {
    if (kind == "constant") return std::make_unique<ConstantSpacing<D>>(h_s);
    if (kind == "preset")
      return make_preset_spacing<D>(require_string(sp, "name", "spacing"), h_s);
    if (kind == "expr") return make_expr_spacing<D>(require_string(sp, "src", "spacing"), h_s);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config.spacing: ") + e.what());
  }
  throw ConfigError("config.spacing.kind: unknown kind '" + kind +
                    "' (want constant, preset or expr)");
}

template <int D>
void parse_problem(const json& root, Problem<D>& out, const std::string& base_dir) {
  out.domain = parse_domain<D>(require(root, "domain", ""), base_dir);
  out.spacing = parse_spacing<D>(require(root, "spacing", ""));

  const json& seeds = require(root, "seeds", "");
  if (seeds.is_string()) {
    if (seeds.get<std::string>() != "auto")
      throw ConfigError("config.seeds: expected \"auto\" or an array of points");
    Point<D> center = out.domain->bounding_box().center();
    if (!out.domain->contains(center))
      throw ConfigError(
          "config.seeds: the bounding-box center lies outside the domain; "
          "specify seed points explicitly");
    out.seeds = {center};
  } else if (seeds.is_array()) {
    if (seeds.empty()) throw ConfigError("config.seeds: at least one seed is required");
    for (std::size_t i = 0; i < seeds.size(); ++i)
      out.seeds.push_back(parse_point<D>(seeds[i], "seeds[" + std::to_string(i) + "]"));
  } else {
    throw ConfigError("config.seeds: expected \"auto\" or an array of points");
  }
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text, const Overrides& overrides,
                           const std::string& base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }

  RunConfig cfg;
  double dim = require_number(root, "dim", "");
  if (dim != 1 && dim != 2 && dim != 3) throw ConfigError("config.dim: must be 1, 2 or 3");
  cfg.dim = static_cast<int>(dim);

  auto opt_int = [&](const char* key, int64_t fallback) -> int64_t {
    if (!root.contains(key)) return fallback;
    if (!root[key].is_number_integer())
      throw ConfigError(std::string("config.") + key + ": expected an integer");
    return root[key].get<int64_t>();
  };

  cfg.fill.n_c = static_cast<int>(opt_int("nc", 12));
  cfg.fill.threads = static_cast<int>(opt_int("threads", 1));
  cfg.fill.n_s = static_cast<int>(opt_int("ns", 32));
  cfg.fill.target_np = opt_int("target_np", 0);
  cfg.fill.rng_seed = static_cast<uint64_t>(opt_int("rng_seed", 0));
  cfg.fill.max_points = opt_int("max_points", 0);

  if (overrides.threads) cfg.fill.threads = *overrides.threads;
  if (overrides.n_c) cfg.fill.n_c = *overrides.n_c;
  if (overrides.n_s) cfg.fill.n_s = *overrides.n_s;
  if (overrides.target_np) cfg.fill.target_np = *overrides.target_np;
  if (overrides.rng_seed) cfg.fill.rng_seed = *overrides.rng_seed;

  if (cfg.fill.threads < 1) throw ConfigError("config.threads: must be at least 1");
  if (cfg.fill.n_s < 1) throw ConfigError("config.ns: must be at least 1");
  if (cfg.fill.n_c < (cfg.dim == 1 ? 1 : 3))
    throw ConfigError("config.nc: must be at least 3 (1 in 1-D)");

  try {
    if (cfg.dim == 1) parse_problem<1>(root, cfg.p1, base_dir);
    else if (cfg.dim == 2) parse_problem<2>(root, cfg.p2, base_dir);
    else parse_problem<3>(root, cfg.p3, base_dir);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path, const Overrides& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::string dir = std::filesystem::path(path).parent_path().string();
  if (dir.empty()) dir = ".";
  return parse_run_config(text, overrides, dir);
}

}  // namespace frontfill
