#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "frontfill/point.hpp"

namespace frontfill {

// Scattered-node Poisson discretization (2-D, Dirichlet only). Global
// indexing puts the interior nodes first, then the boundary nodes.
struct Discretization {
  std::vector<Point<2>> interior;
  std::vector<Point<2>> boundary;
  int stencil_size = 0;
  std::vector<std::vector<int>> stencils;  // per interior node, global indices

  std::size_t total() const { return interior.size() + boundary.size(); }
  const Point<2>& node(int g) const {
    return g < static_cast<int>(interior.size()) ? interior[g]
                                                 : boundary[g - interior.size()];
  }
};

using ScalarField2 = std::function<double(const Point<2>&)>;

// Stencils are the n closest nodes of each interior node (itself
// included), found on a static index over interior + boundary.
Discretization build_discretization(std::vector<Point<2>> interior,
                                    std::vector<Point<2>> boundary, int stencil_size);

// RBF-FD Laplacian weights with the polyharmonic spline phi(r) = r^3 and
// monomial augmentation up to degree 2, in coordinates translated to the
// stencil center. Throws on an unsolvable local system (e.g. collinear
// stencils).
std::vector<double> laplacian_weights(std::span<const Point<2>> stencil_points,
                                      const Point<2>& center);

// Assembles interior rows sum_j w_ij u_j = f(x_i) and identity boundary
// rows u_i = g(x_i), then solves the sparse system to a relative residual
// of 1e-10. Returns u over all nodes in global index order.
std::vector<double> solve_poisson_dirichlet(const Discretization& disc, const ScalarField2& f,
                                            const ScalarField2& g);

// Relative discrete norms e_1 and e_inf of u_h against the exact solution
// at the given nodes.
std::pair<double, double> error_norms(std::span<const double> u_h, const ScalarField2& exact,
                                      std::span<const Point<2>> nodes);

}  // namespace frontfill
