#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "frontfill/domain.hpp"

namespace frontfill {

namespace {

// Closed polyline with optional reprojection onto a polar curve, so star
// boundaries return points exactly on the curve rather than on chords.
struct ClosedPath {
  std::vector<Point<2>> pts;
  std::vector<double> params;  // per-vertex theta when star != nullptr
  const StarPolar2D* star = nullptr;
  std::vector<double> cum;  // cum[i]: length up to vertex i, cum[n]: full loop

  void finish() {
    cum.resize(pts.size() + 1);
    cum[0] = 0;
    for (std::size_t i = 0; i < pts.size(); ++i)
      cum[i + 1] = cum[i] + distance(pts[i], pts[(i + 1) % pts.size()]);
  }
  double length() const { return cum.back(); }

  Point<2> at(double s) const {
    s = std::clamp(s, 0.0, length());
    auto it = std::upper_bound(cum.begin(), cum.end(), s);
    std::size_t i = std::min<std::size_t>(it - cum.begin() - 1, pts.size() - 1);
    double seg = cum[i + 1] - cum[i];
    double frac = seg > 0 ? (s - cum[i]) / seg : 0.0;
    if (star) {
      double t0 = params[i];
      double t1 = i + 1 < pts.size() ? params[i + 1] : 2.0 * M_PI;
      return star->curve_point(t0 + frac * (t1 - t0));
    }
    const Point<2>& a = pts[i];
    const Point<2>& b = pts[(i + 1) % pts.size()];
    if (frac >= 1.0 - 1e-15) return b;
    if (frac <= 1e-15) return a;
    return a + (b - a) * frac;
  }
};

std::vector<Point<2>> sample_path(const ClosedPath& path, const SpacingFn<2>& h) {
  const double L = path.length();
  if (!(L > 0)) throw std::runtime_error("boundary has zero length");

  std::vector<Point<2>> out;
  out.push_back(path.at(0));
  double need = checked_spacing(h, out.back());
  double s_last = 0;
  while (true) {
    double s = s_last + need;
    if (s >= L * (1.0 - 1e-12)) break;
    out.push_back(path.at(s));
    need = checked_spacing(h, out.back());
    s_last = s;
  }

  // Closing the loop: merge the last point into its predecessor's gap if
  // it ended up closer than half a spacing to the start.
  double closing = L - s_last;
  if (out.size() > 3 && closing < 0.5 * checked_spacing(h, out.back())) out.pop_back();

  if (out.size() < 3) {
    out.clear();
    for (int i = 0; i < 3; ++i) out.push_back(path.at(L * i / 3.0));
  }
  return out;
}

ClosedPath star_path(const StarPolar2D& domain, const SpacingFn<2>& h) {
  ClosedPath path;
  path.star = &domain;
  const double two_pi = 2.0 * M_PI;
  const double min_step = two_pi / (1 << 22);
  const double max_step = two_pi / 4096;
  double theta = 0;
  while (theta < two_pi) {
    Point<2> p = domain.curve_point(theta);
    path.pts.push_back(p);
    path.params.push_back(theta);
    double r = std::max(p.norm(), 1e-9);
    double step = std::clamp(checked_spacing(h, p) / (64.0 * r), min_step, max_step);
    theta += step;
  }
  path.finish();
  return path;
}

ClosedPath polygon_path(const std::vector<Point<2>>& verts) {
  ClosedPath path;
  path.pts = verts;
  path.finish();
  return path;
}

}  // namespace

std::vector<Point<2>> boundary_sample_2d(const StarPolar2D& domain, const SpacingFn<2>& h) {
  return sample_path(star_path(domain, h), h);
}

std::vector<Point<2>> boundary_sample_2d(const Polygon2D& domain, const SpacingFn<2>& h) {
  return sample_path(polygon_path(domain.vertices()), h);
}

std::vector<Point<2>> boundary_sample_2d(const Domain<2>& domain, const SpacingFn<2>& h) {
  if (auto* star = dynamic_cast<const StarPolar2D*>(&domain)) return boundary_sample_2d(*star, h);
  if (auto* poly = dynamic_cast<const Polygon2D*>(&domain)) return boundary_sample_2d(*poly, h);
  if (auto* box = dynamic_cast<const Box<2>*>(&domain)) {
    Aabb<2> b = box->bounding_box();
    std::vector<Point<2>> corners = {b.lo, {{b.hi.v[0], b.lo.v[1]}}, b.hi, {{b.lo.v[0], b.hi.v[1]}}};
    return sample_path(polygon_path(corners), h);
  }
  throw std::invalid_argument("domain has no traversable 2-D boundary curve");
}

}  // namespace frontfill
