#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "frontfill/point.hpp"

namespace frontfill {

// Unit directions distributed uniformly over the d-sphere. n_c controls
// the count on the great circle; the total is O(n_c^(d-1)). Patterns are
// immutable and shared between threads; randomization happens at
// expansion time through the caller-supplied rotation.
template <int D>
struct SpherePattern {
  int n_c = 0;
  std::vector<Point<D>> dirs;
};

// dim=1: {-1, +1}. dim=2: n_c angles 2*pi*k/n_c. dim=3: m = ceil(n_c/2)
// latitude bands theta_j = j*pi/m for j=0..m; each pole contributes one
// point and band j contributes round(n_c sin theta_j) azimuthal points,
// at least 1.
template <int D>
SpherePattern<D> unit_sphere_pattern(int n_c);

template <>
inline SpherePattern<1> unit_sphere_pattern<1>(int n_c) {
  if (n_c < 1) throw std::invalid_argument("n_c must be positive");
  SpherePattern<1> pat;
  pat.n_c = n_c;
  pat.dirs = {Point<1>{{-1.0}}, Point<1>{{1.0}}};
  return pat;
}

template <>
inline SpherePattern<2> unit_sphere_pattern<2>(int n_c) {
  if (n_c < 3) throw std::invalid_argument("n_c must be at least 3 for dim >= 2");
  SpherePattern<2> pat;
  pat.n_c = n_c;
  pat.dirs.reserve(n_c);
  for (int k = 0; k < n_c; ++k) {
    double a = 2.0 * M_PI * k / n_c;
    pat.dirs.push_back(Point<2>{{std::cos(a), std::sin(a)}});
  }
  return pat;
}

template <>
inline SpherePattern<3> unit_sphere_pattern<3>(int n_c) {
  if (n_c < 3) throw std::invalid_argument("n_c must be at least 3 for dim >= 2");
  SpherePattern<3> pat;
  pat.n_c = n_c;
  int m = (n_c + 1) / 2;
  for (int j = 0; j <= m; ++j) {
    double theta = M_PI * j / m;
    if (j == 0 || j == m) {
      pat.dirs.push_back(Point<3>{{0.0, 0.0, j == 0 ? 1.0 : -1.0}});
      continue;
    }
    double st = std::sin(theta), ct = std::cos(theta);
    int count = std::max(1, (int)std::lround(n_c * st));
    for (int k = 0; k < count; ++k) {
      double phi = 2.0 * M_PI * k / count;
      pat.dirs.push_back(Point<3>{{st * std::cos(phi), st * std::sin(phi), ct}});
    }
  }
  return pat;
}

// Candidate points on the sphere of the given radius about p.
template <int D>
inline void expand(const Point<D>& p, double radius, const SpherePattern<D>& pattern,
                   const Rotation<D>& rot, std::vector<Point<D>>& out) {
  out.clear();
  out.reserve(pattern.dirs.size());
  for (const auto& u : pattern.dirs) out.push_back(p + rot.apply(u) * radius);
}

template <int D>
inline std::vector<Point<D>> expand(const Point<D>& p, double radius,
                                    const SpherePattern<D>& pattern, const Rotation<D>& rot) {
  std::vector<Point<D>> out;
  expand(p, radius, pattern, rot, out);
  return out;
}

}  // namespace frontfill
