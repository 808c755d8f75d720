#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>

namespace frontfill {

// Fixed-dimension point/vector. D is 1, 2 or 3.
template <int D>
struct Point {
  std::array<double, D> v{};

  double& operator[](int i) { return v[i]; }
  double operator[](int i) const { return v[i]; }

  Point operator+(const Point& o) const {
    Point r;
    for (int i = 0; i < D; ++i) r.v[i] = v[i] + o.v[i];
    return r;
  }
  Point operator-(const Point& o) const {
    Point r;
    for (int i = 0; i < D; ++i) r.v[i] = v[i] - o.v[i];
    return r;
  }
  Point operator*(double s) const {
    Point r;
    for (int i = 0; i < D; ++i) r.v[i] = v[i] * s;
    return r;
  }
  bool operator==(const Point& o) const { return v == o.v; }

  double dot(const Point& o) const {
    double s = 0;
    for (int i = 0; i < D; ++i) s += v[i] * o.v[i];
    return s;
  }
  double squared_norm() const { return dot(*this); }
  double norm() const { return std::sqrt(squared_norm()); }

  bool all_finite() const {
    for (int i = 0; i < D; ++i)
      if (!std::isfinite(v[i])) return false;
    return true;
  }
};

template <int D>
inline double squared_distance(const Point<D>& a, const Point<D>& b) {
  double s = 0;
  for (int i = 0; i < D; ++i) {
    double d = a.v[i] - b.v[i];
    s += d * d;
  }
  return s;
}

template <int D>
inline double distance(const Point<D>& a, const Point<D>& b) {
  return std::sqrt(squared_distance(a, b));
}

template <int D>
inline std::string format_point(const Point<D>& p) {
  std::string s = "(";
  for (int i = 0; i < D; ++i) {
    if (i) s += ", ";
    s += std::to_string(p.v[i]);
  }
  return s + ")";
}

// Axis-aligned bounding box, lo <= hi componentwise.
template <int D>
struct Aabb {
  Point<D> lo{}, hi{};

  bool contains(const Point<D>& p) const {
    for (int i = 0; i < D; ++i)
      if (p.v[i] < lo.v[i] || p.v[i] > hi.v[i]) return false;
    return true;
  }
  Point<D> center() const {
    Point<D> c;
    for (int i = 0; i < D; ++i) c.v[i] = 0.5 * (lo.v[i] + hi.v[i]);
    return c;
  }
  double volume() const {
    double v = 1;
    for (int i = 0; i < D; ++i) v *= hi.v[i] - lo.v[i];
    return v;
  }
  Point<D> sample(std::mt19937_64& rng) const {
    Point<D> p;
    for (int i = 0; i < D; ++i) {
      std::uniform_real_distribution<double> dist(lo.v[i], hi.v[i]);
      p.v[i] = dist(rng);
    }
    return p;
  }
};

// Orthonormal rotation, stored row-major.
template <int D>
struct Rotation {
  std::array<std::array<double, D>, D> m{};

  static Rotation identity() {
    Rotation r;
    for (int i = 0; i < D; ++i) r.m[i][i] = 1.0;
    return r;
  }

  Point<D> apply(const Point<D>& p) const {
    Point<D> out;
    for (int i = 0; i < D; ++i) {
      double s = 0;
      for (int j = 0; j < D; ++j) s += m[i][j] * p.v[j];
      out.v[i] = s;
    }
    return out;
  }
};

// Uniformly random rotation. 2-D draws an angle, 3-D a unit quaternion
// (Shoemake's method); 1-D has only the identity worth using here since
// the candidate pattern is symmetric.
template <int D>
Rotation<D> random_rotation(std::mt19937_64& rng);

template <>
inline Rotation<1> random_rotation<1>(std::mt19937_64&) {
  return Rotation<1>::identity();
}

template <>
inline Rotation<2> random_rotation<2>(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(0.0, 2.0 * M_PI);
  double a = dist(rng);
  double c = std::cos(a), s = std::sin(a);
  Rotation<2> r;
  r.m = {{{c, -s}, {s, c}}};
  return r;
}

template <>
inline Rotation<3> random_rotation<3>(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  double u1 = dist(rng), u2 = dist(rng), u3 = dist(rng);
  double a = std::sqrt(1.0 - u1), b = std::sqrt(u1);
  double qx = a * std::sin(2 * M_PI * u2);
  double qy = a * std::cos(2 * M_PI * u2);
  double qz = b * std::sin(2 * M_PI * u3);
  double qw = b * std::cos(2 * M_PI * u3);
  Rotation<3> r;
  r.m = {{{1 - 2 * (qy * qy + qz * qz), 2 * (qx * qy - qz * qw), 2 * (qx * qz + qy * qw)},
          {2 * (qx * qy + qz * qw), 1 - 2 * (qx * qx + qz * qz), 2 * (qy * qz - qx * qw)},
          {2 * (qx * qz - qy * qw), 2 * (qy * qz + qx * qw), 1 - 2 * (qx * qx + qy * qy)}}};
  return r;
}

// atan2 convention with arg(0, 0) := 0.
inline double planar_arg(double x, double y) {
  if (x == 0.0 && y == 0.0) return 0.0;
  return std::atan2(y, x);
}

}  // namespace frontfill
