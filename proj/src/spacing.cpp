#include "frontfill/spacing.hpp"

#include <cmath>

namespace frontfill {

SpacingPreset spacing_preset_from_name(const std::string& name) {
  if (name == "uniform") return SpacingPreset::Uniform;
  if (name == "clover2d") return SpacingPreset::Clover2d;
  if (name == "bunny2d") return SpacingPreset::Bunny2d;
  if (name == "maze2d") return SpacingPreset::Maze2d;
  if (name == "clover3d") return SpacingPreset::Clover3d;
  if (name == "bunny3d") return SpacingPreset::Bunny3d;
  if (name == "maze3d") return SpacingPreset::Maze3d;
  throw std::invalid_argument("unknown spacing preset '" + name + "'");
}

int spacing_preset_dim(SpacingPreset preset) {
  switch (preset) {
    case SpacingPreset::Uniform: return 0;
    case SpacingPreset::Clover2d:
    case SpacingPreset::Bunny2d:
    case SpacingPreset::Maze2d: return 2;
    case SpacingPreset::Clover3d:
    case SpacingPreset::Bunny3d:
    case SpacingPreset::Maze3d: return 3;
  }
  return 0;
}

namespace {
inline double sqr(double x) { return x * x; }
}

template <int D>
PresetSpacing<D>::PresetSpacing(SpacingPreset preset, double h_s)
    : preset_(preset), h_s_(h_s) {
  if (!(h_s > 0.0) || !std::isfinite(h_s))
    throw std::invalid_argument("spacing scale h_s must be positive and finite");
  int want = spacing_preset_dim(preset);
  if (want != 0 && want != D)
    throw std::invalid_argument("spacing preset needs dimension " + std::to_string(want) +
                                ", got " + std::to_string(D));
}

template <int D>
double PresetSpacing<D>::eval(const Point<D>& p) const {
  double x = p.v[0];
  double y = D >= 2 ? p.v[1] : 0.0;
  double z = D >= 3 ? p.v[2] : 0.0;
  switch (preset_) {
    case SpacingPreset::Uniform:
      return h_s_;
    case SpacingPreset::Clover2d:
      return h_s_ * (1.0 + 4.0 * sqr(std::cos(3.0 * planar_arg(x, y))) *
                               std::tanh(std::sqrt(x * x + y * y)));
    case SpacingPreset::Bunny2d:
      return h_s_ * std::pow(1.0 + y / 100.0, 1.5);
    case SpacingPreset::Maze2d:
      return h_s_ * std::pow(1.0 + y / 20.0, 1.5);
    case SpacingPreset::Clover3d:
      return h_s_ * (0.5 + sqr(std::cos(3.0 * planar_arg(x, y) + M_PI / 3.0)) *
                               std::tanh((2.0 - z) * std::sqrt(x * x + y * y + z * z)));
    case SpacingPreset::Bunny3d:
      return h_s_ * (1.0 + 4.0 * (180.0 - z) / 180.0);
    case SpacingPreset::Maze3d:
      return h_s_ * (4.0 + std::sin(x * M_PI / 5.0));
  }
  return h_s_;
}

template <int D>
std::unique_ptr<SpacingFn<D>> make_preset_spacing(const std::string& name, double h_s) {
  return std::make_unique<PresetSpacing<D>>(spacing_preset_from_name(name), h_s);
}

template <int D>
std::unique_ptr<SpacingFn<D>> make_expr_spacing(const std::string& src, double h_s) {
  if (!(h_s > 0.0) || !std::isfinite(h_s))
    throw std::invalid_argument("spacing scale h_s must be positive and finite");
  return std::make_unique<ExprSpacing<D>>(expr::parse(src, D), h_s);
}

template class PresetSpacing<1>;
template class PresetSpacing<2>;
template class PresetSpacing<3>;
template std::unique_ptr<SpacingFn<1>> make_preset_spacing<1>(const std::string&, double);
template std::unique_ptr<SpacingFn<2>> make_preset_spacing<2>(const std::string&, double);
template std::unique_ptr<SpacingFn<3>> make_preset_spacing<3>(const std::string&, double);
template std::unique_ptr<SpacingFn<1>> make_expr_spacing<1>(const std::string&, double);
template std::unique_ptr<SpacingFn<2>> make_expr_spacing<2>(const std::string&, double);
template std::unique_ptr<SpacingFn<3>> make_expr_spacing<3>(const std::string&, double);

}  // namespace frontfill
