#include "rmt/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "rmt/error.hpp"

namespace rmt {

const QuadratureRule& gauss_legendre(int order) {
  if (order < 1) throw InputError("quadrature order must be positive");
  static std::mutex mutex;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard lock(mutex);
  if (auto it = cache.find(order); it != cache.end()) return it->second;

  // Jacobi matrix of the Legendre recurrence: off-diagonal k / sqrt(4k^2 - 1).
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
  for (int k = 1; k < order; ++k) {
    const double beta = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k, k - 1) = beta;
    jacobi(k - 1, k) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  QuadratureRule rule;
  rule.nodes = solver.eigenvalues();
  rule.weights = 2.0 * solver.eigenvectors().row(0).transpose().array().square();
  return cache.emplace(order, std::move(rule)).first->second;
}

namespace {

double panel(const std::function<double(double)>& f, double a, double b, const QuadratureRule& rule) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (Eigen::Index k = 0; k < rule.nodes.size(); ++k) sum += rule.weights[k] * f(mid + half * rule.nodes[k]);
  return sum * half;
}

double adapt(const std::function<double(double)>& f, double a, double b, double whole, double tol,
             int depth, const QuadratureRule& rule) {
  const double mid = 0.5 * (a + b);
  const double left = panel(f, a, mid, rule);
  const double right = panel(f, mid, b, rule);
  if (depth <= 0 || std::abs(left + right - whole) <= tol) return left + right;
  return adapt(f, a, mid, left, 0.5 * tol, depth - 1, rule) +
         adapt(f, mid, b, right, 0.5 * tol, depth - 1, rule);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol, int max_depth) {
  if (a == b) return 0.0;
  const auto& rule = gauss_legendre(20);
  return adapt(f, a, b, panel(f, a, b, rule), tol, max_depth, rule);
}

Eigen::VectorXd chebyshev_nodes(int count) {
  Eigen::VectorXd x(count);
  for (int k = 0; k < count; ++k) x[k] = std::cos((2.0 * k + 1.0) * M_PI / (2.0 * count));
  return x;
}

}  // namespace rmt
