#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "rmt/measures.hpp"
#include "rmt/solver_config.hpp"

namespace rmt {

/// Real polynomial V with ascending coefficients, even degree and positive
/// leading coefficient. Convexity is checked on the endpoint search box.
class PotentialPolynomial {
 public:
  explicit PotentialPolynomial(std::vector<double> coeffs);

  const std::vector<double>& coeffs() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool convex() const { return convex_; }
  bool even() const;

  double operator()(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;
  std::vector<double> derivative_coeffs() const;

  /// Interval used for the convexity check and endpoint search.
  std::pair<double, double> search_box() const { return box_; }
  /// Endpoint b of the monomial law of the leading term alone.
  double leading_radius() const;

 private:
  std::vector<double> c_;
  std::pair<double, double> box_;
  bool convex_ = false;
};

struct SupportInterval {
  double a = 0.0;
  double b = 0.0;
  double residual_q0 = 0.0;  // |\int V'/sqrt(R)|
  double residual_q1 = 0.0;  // |\int mu V'/sqrt(R) - 2 pi|
  int iterations = 0;
};

struct SingularEquationReport {
  std::vector<double> points;
  std::vector<double> deviation;  // |pv \int rho/(mu - lambda) + V'(lambda)/2|
  double max_deviation = 0.0;
};

/// \int_a^b g(mu) / sqrt((b - mu)(mu - a)) dmu by K-node Gauss-Chebyshev.
double singular_quadrature(const std::function<double(double)>& g, double a, double b, int node_count);

int equilibrium_node_count(const PotentialPolynomial& V);

SupportInterval solve_support(const PotentialPolynomial& V, const SolverConfig& cfg = {});

/// Ascending coefficients of P in rho = P sqrt((b - lambda)(lambda - a)).
std::vector<double> equilibrium_polynomial(const PotentialPolynomial& V, const SupportInterval& s);

double equilibrium_density(const PotentialPolynomial& V, const SupportInterval& s, double lambda);

/// \int rho over the support, by Gauss-Chebyshev of the second kind.
double equilibrium_mass(const PotentialPolynomial& V, const SupportInterval& s);

/// Equilibrium density tabulated on `count` equispaced points of [a, b].
SpectralMeasure equilibrium_measure(const PotentialPolynomial& V, const SupportInterval& s, int count = 4001);

/// \int_0^1 t^alpha / sqrt(1 - t^2) dt.
double monomial_integral(double alpha);
/// Endpoint a of the law for V = |lambda|^alpha / alpha.
double monomial_support(double alpha);
double monomial_density(double alpha, double lambda);

SingularEquationReport verify_singular_equation(const PotentialPolynomial& V, const SupportInterval& s,
                                                const std::function<double(double)>& density,
                                                int points = 50);
SingularEquationReport verify_singular_equation(const PotentialPolynomial& V, const SupportInterval& s,
                                                const GridDensity& density, int points = 50);

}  // namespace rmt
