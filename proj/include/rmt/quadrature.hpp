#pragma once

#include <functional>

#include <Eigen/Dense>

namespace rmt {

struct QuadratureRule {
  Eigen::VectorXd nodes;    // on [-1, 1]
  Eigen::VectorXd weights;
};

/// Gauss-Legendre rule with `order` nodes (Golub-Welsch). Cached per order.
const QuadratureRule& gauss_legendre(int order);

/// Adaptive Gauss-Legendre on [a, b]: bisects until the 20-point estimate of a
/// panel matches the sum of its halves within `tol` (absolute, scaled by panel share).
double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-12,
                 int max_depth = 40);

/// Chebyshev nodes of the first kind, cos((2k-1)pi/2K), k = 1..K.
Eigen::VectorXd chebyshev_nodes(int count);

}  // namespace rmt
