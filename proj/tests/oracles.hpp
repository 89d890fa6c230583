#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's solvers: roots come from the quadratic formula, integrals from
// composite Simpson, resolvents from dense LU.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;

// Root of a f^2 + b f + c = 0 with Im f * Im z > 0.
inline Complex quadratic_root(Complex a, Complex b, Complex c, Complex z) {
  Complex d = std::sqrt(b * b - 4.0 * a * c);
  Complex r1 = (-b + d) / (2.0 * a), r2 = (-b - d) / (2.0 * a);
  return r1.imag() * z.imag() > 0.0 ? r1 : r2;
}

// Semicircle with variance v = beta w^2: v f^2 + z f + 1 = 0.
inline Complex semicircle_f(Complex z, double w, int beta) {
  return quadratic_root(beta * w * w, z, 1.0, z);
}

inline double semicircle_rho(double x, double w, int beta) {
  double r2 = 4.0 * beta * w * w;
  if (x * x >= r2) return 0.0;
  return std::sqrt(r2 - x * x) / (2.0 * beta * M_PI * w * w);
}

inline double laguerre_rho(double x, double a, int beta) {
  double top = 4.0 * beta * a * a;
  if (x <= 0.0 || x >= top) return 0.0;
  return std::sqrt((top - x) / x) / (2.0 * beta * M_PI * a * a);
}

inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  if (panels % 2) ++panels;
  double h = (b - a) / panels, s = f(a) + f(b);
  for (int k = 1; k < panels; ++k) s += f(a + k * h) * (k % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

inline Complex simpson_c(const std::function<Complex(double)>& f, double a, double b, int panels) {
  auto re = [&](double x) { return f(x).real(); };
  auto im = [&](double x) { return f(x).imag(); };
  return {simpson(re, a, b, panels), simpson(im, a, b, panels)};
}

inline Complex atoms_stieltjes(const std::vector<double>& x, const std::vector<double>& w, Complex z) {
  Complex s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += w[k] / (x[k] - z);
  return s;
}

template <typename Matrix>
Complex resolvent_trace(const Matrix& m, Complex z) {
  Eigen::MatrixXcd a = m.template cast<Complex>();
  a.diagonal().array() -= z;
  return a.fullPivLu().inverse().trace() / static_cast<double>(m.rows());
}

// sup |F_emp - F| over sorted samples, checking both sides of each jump.
inline double ks_samples(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double F = cdf(xs[i]);
    d = std::max({d, std::abs((i + 1) / n - F), std::abs(i / n - F)});
  }
  return d;
}

inline double semicircle_cdf(double x, double w, int beta) {
  double r = 2.0 * std::sqrt(static_cast<double>(beta)) * w;
  if (x <= -r) return 0.0;
  if (x >= r) return 1.0;
  double t = x / r;
  return 0.5 + (t * std::sqrt(1.0 - t * t) + std::asin(t)) / M_PI;
}

}  // namespace oracle
