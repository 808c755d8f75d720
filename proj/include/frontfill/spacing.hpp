#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include "frontfill/expr.hpp"
#include "frontfill/point.hpp"

namespace frontfill {

// Nodal spacing function h(p). Implementations must be positive and finite
// everywhere inside the domain they are used on; violations are reported
// by checked_spacing below. Immutable after construction and safe for
// unsynchronized concurrent evaluation.
template <int D>
class SpacingFn {
 public:
  virtual ~SpacingFn() = default;
  virtual double eval(const Point<D>& p) const = 0;
};

// eval with the hard-error contract: non-positive or non-finite h(p)
// throws, naming the offending point.
template <int D>
inline double checked_spacing(const SpacingFn<D>& f, const Point<D>& p) {
  double h = f.eval(p);
  if (!(h > 0.0) || !std::isfinite(h))
    throw std::runtime_error("spacing function returned " + std::to_string(h) + " at " +
                             format_point(p) + "; h must be positive and finite");
  return h;
}

template <int D>
class ConstantSpacing final : public SpacingFn<D> {
 public:
  explicit ConstantSpacing(double h) : h_(h) {}
  double eval(const Point<D>&) const override { return h_; }

 private:
  double h_;
};

// base spacing amplified by a constant factor (bootstrapping uses a*h).
template <int D>
class ScaledSpacing final : public SpacingFn<D> {
 public:
  ScaledSpacing(const SpacingFn<D>& base, double factor) : base_(base), factor_(factor) {}
  double eval(const Point<D>& p) const override { return factor_ * base_.eval(p); }

 private:
  const SpacingFn<D>& base_;
  double factor_;
};

enum class SpacingPreset {
  Uniform,
  Clover2d,
  Bunny2d,
  Maze2d,
  Clover3d,
  Bunny3d,
  Maze3d,
};

SpacingPreset spacing_preset_from_name(const std::string& name);
int spacing_preset_dim(SpacingPreset preset);  // 0 = any dimension

// One of the built-in variable-density profiles, scaled by h_s.
template <int D>
class PresetSpacing final : public SpacingFn<D> {
 public:
  PresetSpacing(SpacingPreset preset, double h_s);
  double eval(const Point<D>& p) const override;

 private:
  SpacingPreset preset_;
  double h_s_;
};

// h_s times a parsed expression over x[,y[,z]].
template <int D>
class ExprSpacing final : public SpacingFn<D> {
 public:
  ExprSpacing(expr::Ast ast, double h_s) : ast_(std::move(ast)), h_s_(h_s) {}
  double eval(const Point<D>& p) const override { return h_s_ * ast_.eval(p.v.data()); }

 private:
  expr::Ast ast_;
  double h_s_;
};

template <int D>
std::unique_ptr<SpacingFn<D>> make_preset_spacing(const std::string& name, double h_s);

template <int D>
std::unique_ptr<SpacingFn<D>> make_expr_spacing(const std::string& src, double h_s);

}  // namespace frontfill
