#include "frontfill/domain.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace frontfill {

namespace {

// Deterministic per-point seed for the retry rays, so contains() stays
// pure and thread-safe.
uint64_t mix_bits(uint64_t h, double v) {
  uint64_t b;
  std::memcpy(&b, &v, sizeof b);
  h ^= b + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

double cross2(const Point<2>& a, const Point<2>& b) { return a.v[0] * b.v[1] - a.v[1] * b.v[0]; }

Point<3> cross3(const Point<3>& a, const Point<3>& b) {
  return Point<3>{{a.v[1] * b.v[2] - a.v[2] * b.v[1], a.v[2] * b.v[0] - a.v[0] * b.v[2],
                   a.v[0] * b.v[1] - a.v[1] * b.v[0]}};
}

}  // namespace

template <int D>
Box<D>::Box(Aabb<D> box) : box_(box) {
  for (int i = 0; i < D; ++i)
    if (!(box_.lo.v[i] <= box_.hi.v[i]) || !std::isfinite(box_.lo.v[i]) ||
        !std::isfinite(box_.hi.v[i]))
      throw std::invalid_argument("box bounds must be finite with lo <= hi");
}

template class Box<1>;
template class Box<2>;
template class Box<3>;

// ---------------------------------------------------------------------------
// Star shapes

StarPolar2D::StarPolar2D(std::function<double(double)> radius) : radius_(std::move(radius)) {
  constexpr int kSamples = 16384;
  double r_max = 0;
  for (int i = 0; i < kSamples; ++i) {
    double theta = 2.0 * M_PI * i / kSamples;
    double r = radius_(theta);
    if (!(r > 0.0) || !std::isfinite(r))
      throw std::invalid_argument("star radius must be strictly positive, got " +
                                  std::to_string(r) + " at theta=" + std::to_string(theta));
    r_max = std::max(r_max, r);
  }
  box_.lo = Point<2>{{-r_max, -r_max}};
  box_.hi = Point<2>{{r_max, r_max}};
}

bool StarPolar2D::contains(const Point<2>& p) const {
  double r = radius_(planar_arg(p.v[0], p.v[1]));
  return p.v[0] * p.v[0] + p.v[1] * p.v[1] < r * r;
}

Point<2> StarPolar2D::curve_point(double theta) const {
  double r = radius_(theta);
  return Point<2>{{r * std::cos(theta), r * std::sin(theta)}};
}

StarSpherical3D::StarSpherical3D(std::function<double(double, double)> radius)
    : radius_(std::move(radius)) {
  constexpr int kPhi = 256, kTheta = 128;
  double r_max = 0;
  for (int i = 0; i < kPhi; ++i) {
    double phi = 2.0 * M_PI * i / kPhi;
    for (int j = 0; j <= kTheta; ++j) {
      double theta = M_PI * j / kTheta;
      double r = radius_(phi, theta);
      if (!(r > 0.0) || !std::isfinite(r))
        throw std::invalid_argument("star radius must be strictly positive, got " +
                                    std::to_string(r));
      r_max = std::max(r_max, r);
    }
  }
  box_.lo = Point<3>{{-r_max, -r_max, -r_max}};
  box_.hi = Point<3>{{r_max, r_max, r_max}};
}

bool StarSpherical3D::contains(const Point<3>& p) const {
  double rho = p.norm();
  if (rho == 0.0) return true;
  double phi = planar_arg(p.v[0], p.v[1]);
  if (phi < 0) phi += 2.0 * M_PI;
  double theta = std::acos(std::clamp(p.v[2] / rho, -1.0, 1.0));
  return rho < radius_(phi, theta);
}

StarPolar2D make_clover2d() {
  return StarPolar2D([](double theta) {
    double c = std::cos(3.0 * (theta - M_PI / 6.0));
    return 1.5 - c * c * c;
  });
}

StarSpherical3D make_clover3d() {
  return StarSpherical3D([](double phi, double theta) {
    double c = std::cos(3.0 * (phi - M_PI / 6.0));
    double t = (M_PI - theta) * theta;
    return 1.5 - c * c * c * t * t / 8.0;
  });
}

// ---------------------------------------------------------------------------
// Polygon

Polygon2D::Polygon2D(std::vector<Point<2>> vertices) : verts_(std::move(vertices)) {
  if (verts_.size() >= 2 && verts_.front() == verts_.back()) verts_.pop_back();
  if (verts_.size() < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
  for (const auto& v : verts_)
    if (!v.all_finite()) throw std::invalid_argument("polygon vertex not finite");

  const std::size_t n = verts_.size();
  for (std::size_t i = 0; i < n; ++i)
    if (verts_[i] == verts_[(i + 1) % n])
      throw std::invalid_argument("polygon has a zero-length edge at vertex " +
                                  std::to_string(i));

  // Reject self-intersection: any contact between non-adjacent edges.
  auto orient = [](const Point<2>& a, const Point<2>& b, const Point<2>& c) {
    double v = cross2(b - a, c - a);
    return v > 0 ? 1 : v < 0 ? -1 : 0;
  };
  auto on_segment = [](const Point<2>& a, const Point<2>& b, const Point<2>& c) {
    return std::min(a.v[0], b.v[0]) <= c.v[0] && c.v[0] <= std::max(a.v[0], b.v[0]) &&
           std::min(a.v[1], b.v[1]) <= c.v[1] && c.v[1] <= std::max(a.v[1], b.v[1]);
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) continue;
      const Point<2>&a = verts_[i], &b = verts_[(i + 1) % n];
      const Point<2>&c = verts_[j], &d = verts_[(j + 1) % n];
      int o1 = orient(a, b, c), o2 = orient(a, b, d);
      int o3 = orient(c, d, a), o4 = orient(c, d, b);
      bool hit = (o1 != o2 && o3 != o4) || (o1 == 0 && on_segment(a, b, c)) ||
                 (o2 == 0 && on_segment(a, b, d)) || (o3 == 0 && on_segment(c, d, a)) ||
                 (o4 == 0 && on_segment(c, d, b));
      if (hit)
        throw std::invalid_argument("polygon self-intersects between edges " +
                                    std::to_string(i) + " and " + std::to_string(j));
    }
  }

  box_.lo = box_.hi = verts_[0];
  for (const auto& v : verts_) {
    for (int k = 0; k < 2; ++k) {
      box_.lo.v[k] = std::min(box_.lo.v[k], v.v[k]);
      box_.hi.v[k] = std::max(box_.hi.v[k], v.v[k]);
    }
  }
}

double Polygon2D::perimeter() const {
  double L = 0;
  for (std::size_t i = 0; i < verts_.size(); ++i)
    L += distance(verts_[i], verts_[(i + 1) % verts_.size()]);
  return L;
}

bool Polygon2D::contains(const Point<2>& p) const {
  if (!box_.contains(p)) return false;

  uint64_t seed = mix_bits(mix_bits(0x706f6c79ULL, p.v[0]), p.v[1]);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);

  const std::size_t n = verts_.size();
  bool inside = false;
  for (int attempt = 0; attempt < 8; ++attempt) {
    double a = angle(rng);
    Point<2> dir{{std::cos(a), std::sin(a)}};
    bool degenerate = false;
    int crossings = 0;
    for (std::size_t i = 0; i < n && !degenerate; ++i) {
      Point<2> e = verts_[(i + 1) % n] - verts_[i];
      double elen = e.norm();
      double denom = cross2(dir, e);
      if (std::fabs(denom) < 1e-12 * elen) {
        // Ray nearly parallel to this edge: only a problem if the edge
        // straddles the ray line; retry only then.
        double d0 = cross2(dir, verts_[i] - p);
        if (std::fabs(d0) < 1e-9 * elen) degenerate = true;
        continue;
      }
      Point<2> w = verts_[i] - p;
      double t = cross2(w, e) / denom;
      double s = cross2(w, dir) / denom;
      if (std::fabs(t) < 1e-12) degenerate = true;  // point on (the line of) the edge
      if (t <= 0) continue;
      if (s < -1e-12 || s > 1.0 + 1e-12) continue;
      if (s < 1e-12 || s > 1.0 - 1e-12) {
        degenerate = true;  // grazing a vertex
        continue;
      }
      ++crossings;
    }
    inside = crossings % 2 == 1;
    if (!degenerate) return inside;
  }
  return inside;  // all retries degenerate; keep the last parity
}

Polygon2D Polygon2D::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open polygon file '" + path + "'");
  std::vector<Point<2>> verts;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    double x, y;
    char comma;
    std::istringstream ss(line);
    if (!(ss >> x >> comma >> y) || comma != ',')
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected 'x,y' vertex row");
    verts.push_back(Point<2>{{x, y}});
  }
  return Polygon2D(std::move(verts));
}

// ---------------------------------------------------------------------------
// Triangle mesh

TriMesh3D::TriMesh3D(std::vector<std::array<Point<3>, 3>> triangles) : tris_(std::move(triangles)) {
  if (tris_.empty()) throw std::invalid_argument("mesh has no triangles");

  // Weld vertices by exact coordinates, then check every undirected edge
  // is shared by exactly two triangles. Parity containment is undefined
  // on open or non-manifold meshes, so violations are hard errors.
  std::map<std::array<double, 3>, int> weld;
  auto vid = [&](const Point<3>& p) {
    auto [it, _] = weld.try_emplace(p.v, static_cast<int>(weld.size()));
    return it->second;
  };
  std::map<std::pair<int, int>, int> edge_count;
  for (const auto& t : tris_) {
    int a = vid(t[0]), b = vid(t[1]), c = vid(t[2]);
    if (a == b || b == c || a == c)
      throw std::invalid_argument("mesh contains a degenerate triangle");
    for (auto [u, v] : {std::pair{a, b}, {b, c}, {c, a}})
      ++edge_count[{std::min(u, v), std::max(u, v)}];
  }
  for (const auto& [edge, count] : edge_count)
    if (count != 2)
      throw std::invalid_argument("mesh is not watertight: an edge is shared by " +
                                  std::to_string(count) + " triangles (expected 2)");

  box_.lo = box_.hi = tris_[0][0];
  for (const auto& t : tris_)
    for (const auto& p : t)
      for (int k = 0; k < 3; ++k) {
        box_.lo.v[k] = std::min(box_.lo.v[k], p.v[k]);
        box_.hi.v[k] = std::max(box_.hi.v[k], p.v[k]);
      }
}

bool TriMesh3D::contains(const Point<3>& p) const {
  if (!box_.contains(p)) return false;

  uint64_t seed = mix_bits(mix_bits(mix_bits(0x6d657368ULL, p.v[0]), p.v[1]), p.v[2]);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  bool inside = false;
  for (int attempt = 0; attempt < 8; ++attempt) {
    Point<3> dir{{gauss(rng), gauss(rng), gauss(rng)}};
    double len = dir.norm();
    if (len < 1e-12) continue;
    dir = dir * (1.0 / len);

    bool degenerate = false;
    int crossings = 0;
    for (const auto& t : tris_) {
      Point<3> e1 = t[1] - t[0], e2 = t[2] - t[0];
      Point<3> pvec = cross3(dir, e2);
      double det = e1.dot(pvec);
      double scale = e1.norm() * e2.norm();
      if (std::fabs(det) < 1e-12 * scale) continue;  // ray parallel to plane
      double inv = 1.0 / det;
      Point<3> tvec = p - t[0];
      double u = tvec.dot(pvec) * inv;
      if (u < -1e-12 || u > 1 + 1e-12) continue;
      Point<3> qvec = cross3(tvec, e1);
      double v = dir.dot(qvec) * inv;
      if (v < -1e-12 || u + v > 1 + 1e-12) continue;
      double hit_t = e2.dot(qvec) * inv;
      if (std::fabs(hit_t) < 1e-12 * std::max(1.0, p.norm())) {
        degenerate = true;  // point lies on the surface
        break;
      }
      if (hit_t < 0) continue;
      if (u < 1e-9 || v < 1e-9 || u + v > 1 - 1e-9) {
        degenerate = true;  // grazing an edge or vertex
        break;
      }
      ++crossings;
    }
    inside = crossings % 2 == 1;
    if (!degenerate) return inside;
  }
  return inside;
}

namespace {

TriMesh3D parse_stl_ascii(const std::string& text, const std::string& path) {
  std::istringstream in(text);
  std::string tok;
  std::vector<std::array<Point<3>, 3>> tris;
  std::array<Point<3>, 3> tri;
  int corner = 0;
  while (in >> tok) {
    if (tok == "vertex") {
      Point<3> p;
      if (!(in >> p.v[0] >> p.v[1] >> p.v[2]))
        throw std::runtime_error(path + ": malformed STL vertex");
      if (corner > 2) throw std::runtime_error(path + ": facet with more than 3 vertices");
      tri[corner++] = p;
    } else if (tok == "endfacet") {
      if (corner != 3) throw std::runtime_error(path + ": facet with fewer than 3 vertices");
      tris.push_back(tri);
      corner = 0;
    }
  }
  return TriMesh3D(std::move(tris));
}

TriMesh3D parse_stl_binary(const std::string& data, const std::string& path) {
  uint32_t count;
  std::memcpy(&count, data.data() + 80, 4);
  std::vector<std::array<Point<3>, 3>> tris;
  tris.reserve(count);
  const char* rec = data.data() + 84;
  for (uint32_t i = 0; i < count; ++i, rec += 50) {
    std::array<Point<3>, 3> tri;
    for (int c = 0; c < 3; ++c)
      for (int k = 0; k < 3; ++k) {
        float f;
        std::memcpy(&f, rec + 12 + 12 * c + 4 * k, 4);
        tri[c].v[k] = f;
      }
    tris.push_back(tri);
  }
  (void)path;
  return TriMesh3D(std::move(tris));
}

}  // namespace

TriMesh3D TriMesh3D::load_stl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open mesh file '" + path + "'");
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (data.size() >= 84) {
    uint32_t count;
    std::memcpy(&count, data.data() + 80, 4);
    if (data.size() == 84 + 50ull * count) return parse_stl_binary(data, path);
  }
  return parse_stl_ascii(data, path);
}

TriMesh3D TriMesh3D::load_obj(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mesh file '" + path + "'");
  std::vector<Point<3>> verts;
  std::vector<std::array<Point<3>, 3>> tris;
  std::string line;
  std::size_t lineno = 0;
  auto resolve = [&](long idx) -> const Point<3>& {
    long n = static_cast<long>(verts.size());
    long i = idx > 0 ? idx - 1 : n + idx;
    if (i < 0 || i >= n)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": vertex index " +
                               std::to_string(idx) + " out of range");
    return verts[i];
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string tag;
    if (!(ss >> tag)) continue;
    if (tag == "v") {
      Point<3> p;
      if (!(ss >> p.v[0] >> p.v[1] >> p.v[2]))
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": malformed vertex");
      verts.push_back(p);
    } else if (tag == "f") {
      std::vector<long> ids;
      std::string corner;
      while (ss >> corner) ids.push_back(std::stol(corner.substr(0, corner.find('/'))));
      if (ids.size() != 3)
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": only triangular faces are supported");
      tris.push_back({resolve(ids[0]), resolve(ids[1]), resolve(ids[2])});
    }
  }
  return TriMesh3D(std::move(tris));
}

TriMesh3D TriMesh3D::load_file(const std::string& path) {
  auto dot = path.rfind('.');
  std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  for (auto& c : ext) c = static_cast<char>(std::tolower(c));
  if (ext == "stl") return load_stl(path);
  if (ext == "obj") return load_obj(path);
  throw std::runtime_error("unsupported mesh format '" + ext + "' (want .stl or .obj)");
}

}  // namespace frontfill
