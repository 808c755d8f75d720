#include "frontfill/solver.hpp"

#include <omp.h>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>
#include <stdexcept>
#include <string>

#include "frontfill/kdtree.hpp"

namespace frontfill {

namespace {
constexpr int kMonomials = 6;  // 1, x, y, x^2, xy, y^2
}

Discretization build_discretization(std::vector<Point<2>> interior,
                                    std::vector<Point<2>> boundary, int stencil_size) {
  Discretization disc;
  disc.interior = std::move(interior);
  disc.boundary = std::move(boundary);
  disc.stencil_size = stencil_size;
  if (disc.boundary.empty()) throw std::invalid_argument("boundary node set is empty");
  if (disc.interior.empty()) throw std::invalid_argument("interior node set is empty");
  const int total = static_cast<int>(disc.total());
  if (stencil_size < 1 || stencil_size > total)
    throw std::invalid_argument("stencil size must be in [1, number of nodes]");

  std::vector<Point<2>> all;
  all.reserve(total);
  all.insert(all.end(), disc.interior.begin(), disc.interior.end());
  all.insert(all.end(), disc.boundary.begin(), disc.boundary.end());
  StaticKdTree<2> tree(std::move(all));

  const int64_t ni = static_cast<int64_t>(disc.interior.size());
  disc.stencils.resize(ni);
#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < ni; ++i) {
    auto hits = tree.knn(disc.interior[i], stencil_size);
    auto& st = disc.stencils[i];
    st.reserve(hits.size());
    for (const auto& [idx, dist] : hits) st.push_back(idx);
  }
  return disc;
}

std::vector<double> laplacian_weights(std::span<const Point<2>> stencil_points,
                                      const Point<2>& center) {
  const int n = static_cast<int>(stencil_points.size());
  if (n < kMonomials)
    throw std::invalid_argument("stencil needs at least " + std::to_string(kMonomials) +
                                " points for degree-2 augmentation");

  // Local coordinates translated to the center.
  std::vector<Point<2>> z(n);
  for (int i = 0; i < n; ++i) z[i] = stencil_points[i] - center;

  const int m = n + kMonomials;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double r = distance(z[i], z[j]);
      M(i, j) = r * r * r;
    }
    double x = z[i].v[0], y = z[i].v[1];
    const double mono[kMonomials] = {1.0, x, y, x * x, x * y, y * y};
    for (int c = 0; c < kMonomials; ++c) {
      M(i, n + c) = mono[c];
      M(n + c, i) = mono[c];
    }
    // Laplacian of r^3 about the center: 9 r in 2-D.
    rhs(i) = 9.0 * z[i].norm();
  }
  // Laplacian of the monomials at the origin.
  rhs(n + 3) = 2.0;
  rhs(n + 5) = 2.0;

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
  Eigen::VectorXd sol = lu.solve(rhs);
  // One refinement step keeps the residual near machine level.
  sol += lu.solve(rhs - M * sol);

  double resid = (M * sol - rhs).lpNorm<Eigen::Infinity>();
  double scale = std::max(1.0, rhs.lpNorm<Eigen::Infinity>());
  if (!sol.allFinite() || resid > 1e-8 * scale)
    throw std::runtime_error(
        "ill-conditioned RBF-FD stencil (residual " + std::to_string(resid) +
        "); the stencil nodes may be collinear or nearly coincident");

  return std::vector<double>(sol.data(), sol.data() + n);
}

std::vector<double> solve_poisson_dirichlet(const Discretization& disc, const ScalarField2& f,
                                            const ScalarField2& g) {
  const int ni = static_cast<int>(disc.interior.size());
  const int nb = static_cast<int>(disc.boundary.size());
  const int total = ni + nb;
  if (static_cast<int>(disc.stencils.size()) != ni)
    throw std::invalid_argument("discretization is missing its stencils");

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(ni) * disc.stencil_size + nb);
  Eigen::VectorXd b(total);

  std::vector<std::vector<double>> weights(ni);
  std::string error;
#pragma omp parallel for schedule(dynamic, 64)
  for (int i = 0; i < ni; ++i) {
    try {
      std::vector<Point<2>> pts;
      pts.reserve(disc.stencils[i].size());
      for (int gidx : disc.stencils[i]) pts.push_back(disc.node(gidx));
      weights[i] = laplacian_weights(pts, disc.interior[i]);
    } catch (const std::exception& e) {
#pragma omp critical
      error = "stencil " + std::to_string(i) + ": " + e.what();
    }
  }
  if (!error.empty()) throw std::runtime_error(error);

  for (int i = 0; i < ni; ++i) {
    const auto& st = disc.stencils[i];
    for (std::size_t j = 0; j < st.size(); ++j) triplets.emplace_back(i, st[j], weights[i][j]);
    b(i) = f(disc.interior[i]);
  }
  for (int i = 0; i < nb; ++i) {
    triplets.emplace_back(ni + i, ni + i, 1.0);
    b(ni + i) = g(disc.boundary[i]);
  }

  Eigen::SparseMatrix<double> A(total, total);
  A.setFromTriplets(triplets.begin(), triplets.end());
  A.makeCompressed();

  Eigen::SparseLU<Eigen::SparseMatrix<double>> solver;
  solver.analyzePattern(A);
  solver.factorize(A);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("sparse factorization failed; the assembled system is singular");
  Eigen::VectorXd u = solver.solve(b);
  if (solver.info() != Eigen::Success) throw std::runtime_error("sparse solve failed");

  double bnorm = b.norm();
  double resid = (A * u - b).norm() / (bnorm > 0 ? bnorm : 1.0);
  if (!u.allFinite() || resid > 1e-10)
    throw std::runtime_error("solver did not reach the required residual (got " +
                             std::to_string(resid) + ")");

  return std::vector<double>(u.data(), u.data() + total);
}

std::pair<double, double> error_norms(std::span<const double> u_h, const ScalarField2& exact,
                                      std::span<const Point<2>> nodes) {
  if (u_h.size() != nodes.size())
    throw std::invalid_argument("solution and node counts differ");
  double err1 = 0, ref1 = 0, err_inf = 0, ref_inf = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    double u = exact(nodes[i]);
    err1 += std::fabs(u_h[i] - u);
    ref1 += std::fabs(u);
    err_inf = std::max(err_inf, std::fabs(u_h[i] - u));
    ref_inf = std::max(ref_inf, std::fabs(u));
  }
  if (ref1 == 0 || ref_inf == 0) throw std::invalid_argument("exact solution has zero norm");
  return {err1 / ref1, err_inf / ref_inf};
}

}  // namespace frontfill
