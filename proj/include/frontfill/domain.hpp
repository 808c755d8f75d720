#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "frontfill/point.hpp"
#include "frontfill/spacing.hpp"

namespace frontfill {

// Bounded domain represented by its characteristic function plus a
// bounding box. Immutable after construction; contains() is pure and
// safe for unsynchronized concurrent use.
template <int D>
class Domain {
 public:
  virtual ~Domain() = default;
  virtual bool contains(const Point<D>& p) const = 0;
  virtual Aabb<D> bounding_box() const = 0;
};

using Domain1 = Domain<1>;
using Domain2 = Domain<2>;
using Domain3 = Domain<3>;

template <int D>
class Box final : public Domain<D> {
 public:
  explicit Box(Aabb<D> box);
  bool contains(const Point<D>& p) const override { return box_.contains(p); }
  Aabb<D> bounding_box() const override { return box_; }

 private:
  Aabb<D> box_;
};

// Star-shaped region around the origin, enclosed by the polar curve
// rho = radius(theta). Containment checks the inclusion radius at
// arg(x, y); the bounding box is the cube of the sampled max radius.
class StarPolar2D final : public Domain<2> {
 public:
  explicit StarPolar2D(std::function<double(double)> radius);
  bool contains(const Point<2>& p) const override;
  Aabb<2> bounding_box() const override { return box_; }
  double radius(double theta) const { return radius_(theta); }
  Point<2> curve_point(double theta) const;

 private:
  std::function<double(double)> radius_;
  Aabb<2> box_;
};

// Star-shaped region enclosed by rho = radius(phi, theta) in spherical
// coordinates (phi azimuthal in [0, 2pi), theta polar in [0, pi]).
class StarSpherical3D final : public Domain<3> {
 public:
  explicit StarSpherical3D(std::function<double(double, double)> radius);
  bool contains(const Point<3>& p) const override;
  Aabb<3> bounding_box() const override { return box_; }

 private:
  std::function<double(double, double)> radius_;
  Aabb<3> box_;
};

// The test domain enclosed by r(theta) = 3/2 - cos^3(3(theta - pi/6)).
StarPolar2D make_clover2d();
// Its 3-D counterpart, r(phi, theta) = 3/2 - cos^3(3(phi - pi/6)) (pi - theta)^2 theta^2 / 8.
StarSpherical3D make_clover3d();

// Closed, non-self-intersecting polygon with >= 3 vertices. Containment
// is even-odd ray casting with a random ray direction, retried on
// near-degenerate hits.
class Polygon2D final : public Domain<2> {
 public:
  explicit Polygon2D(std::vector<Point<2>> vertices);
  bool contains(const Point<2>& p) const override;
  Aabb<2> bounding_box() const override { return box_; }
  const std::vector<Point<2>>& vertices() const { return verts_; }
  double perimeter() const;

  // Rows of "x,y" in vertex order.
  static Polygon2D load_csv(const std::string& path);

 private:
  std::vector<Point<2>> verts_;
  Aabb<2> box_;
};

// Watertight triangle soup; every undirected edge must be shared by
// exactly two triangles (validated at load, hard error otherwise).
// Containment is ray parity against the triangles.
class TriMesh3D final : public Domain<3> {
 public:
  explicit TriMesh3D(std::vector<std::array<Point<3>, 3>> triangles);
  bool contains(const Point<3>& p) const override;
  Aabb<3> bounding_box() const override { return box_; }
  std::size_t triangle_count() const { return tris_.size(); }

  // Dispatches on extension: .stl (ASCII or binary) or .obj (triangles only).
  static TriMesh3D load_file(const std::string& path);
  static TriMesh3D load_stl(const std::string& path);
  static TriMesh3D load_obj(const std::string& path);

 private:
  std::vector<std::array<Point<3>, 3>> tris_;
  Aabb<3> box_;
};

// Samples points along the boundary of a 2-D domain so that consecutive
// arc-length gaps stay within [0.5 h, 1.5 h] of the spacing at each
// placed point. Falls back to 3 evenly spaced points when h exceeds the
// perimeter. Needed by the validation solver; interior placement is the
// fill module's job.
std::vector<Point<2>> boundary_sample_2d(const StarPolar2D& domain, const SpacingFn<2>& h);
std::vector<Point<2>> boundary_sample_2d(const Polygon2D& domain, const SpacingFn<2>& h);
std::vector<Point<2>> boundary_sample_2d(const Domain<2>& domain, const SpacingFn<2>& h);

}  // namespace frontfill
