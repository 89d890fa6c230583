#include "rmt/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rmt/error.hpp"
#include "rmt/quadrature.hpp"

namespace rmt {

namespace {

double horner(const std::vector<double>& c, double x) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
  return v;
}

std::vector<double> differentiate(const std::vector<double>& c) {
  if (c.size() <= 1) return {0.0};
  std::vector<double> d(c.size() - 1);
  for (std::size_t j = 1; j < c.size(); ++j) d[j - 1] = static_cast<double>(j) * c[j];
  return d;
}

// Root of V' by bisection; V' runs from -inf to +inf for even degree with positive lead.
double minimizer(const PotentialPolynomial& V) {
  const auto& c = V.coeffs();
  double lead = c.back(), bound = 1.0;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) bound = std::max(bound, 1.0 + std::abs(c[i] / lead));
  double lo = -bound - 1.0, hi = bound + 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
    double mid = 0.5 * (lo + hi);
    (V.derivative(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct Conditions {
  double f0, f1;
  double j00, j01, j10, j11;
};

Conditions conditions(const PotentialPolynomial& V, double c, double r, int K) {
  Conditions k{};
  double w = M_PI / K;
  for (int i = 1; i <= K; ++i) {
    double ct = std::cos((2.0 * i - 1.0) * M_PI / (2.0 * K));
    double mu = c + r * ct;
    double d1 = V.derivative(mu), d2 = V.second_derivative(mu);
    k.f0 += w * d1;
    k.f1 += w * mu * d1;
    k.j00 += w * d2;
    k.j01 += w * ct * d2;
    k.j10 += w * (d1 + mu * d2);
    k.j11 += w * ct * (d1 + mu * d2);
  }
  k.f1 -= 2.0 * M_PI;
  return k;
}

}  // namespace

PotentialPolynomial::PotentialPolynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) {
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (!std::isfinite(c_[i])) throw InputError("non-finite potential coefficient");
  while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
  const char* rule = "potential must be a convex polynomial of an even degree";
  if (c_.size() % 2 == 0) throw InputError(std::string(rule) + " (odd degree)");
  if (c_.size() < 3) throw InputError(std::string(rule) + " (degree below 2)");
  if (!(c_.back() > 0.0)) throw InputError(std::string(rule) + " (nonpositive leading coefficient)");

  double m = minimizer(*this);
  double R = leading_radius();
  box_ = {m - 3.0 * R - 1.0, m + 3.0 * R + 1.0};
  convex_ = true;
  double scale = 0.0;
  for (int k = 0; k < 1000; ++k) {
    double x = box_.first + (box_.second - box_.first) * k / 999.0;
    scale = std::max(scale, std::abs(second_derivative(x)));
  }
  for (int k = 0; k < 1000; ++k) {
    double x = box_.first + (box_.second - box_.first) * k / 999.0;
    if (second_derivative(x) < -1e-12 * std::max(1.0, scale)) convex_ = false;
  }
}

bool PotentialPolynomial::even() const {
  for (std::size_t j = 1; j < c_.size(); j += 2)
    if (c_[j] != 0.0) return false;
  return true;
}

double PotentialPolynomial::operator()(double x) const { return horner(c_, x); }

double PotentialPolynomial::derivative(double x) const {
  double v = 0.0;
  for (std::size_t j = c_.size() - 1; j >= 1; --j) v = v * x + static_cast<double>(j) * c_[j];
  return v;
}

double PotentialPolynomial::second_derivative(double x) const {
  double v = 0.0;
  for (std::size_t j = c_.size() - 1; j >= 2; --j) v = v * x + static_cast<double>(j * (j - 1)) * c_[j];
  return v;
}

std::vector<double> PotentialPolynomial::derivative_coeffs() const { return differentiate(c_); }

double PotentialPolynomial::leading_radius() const {
  double alpha = degree();
  double kappa = c_.back() * alpha;
  return std::pow(M_PI / (kappa * monomial_integral(alpha)), 1.0 / alpha);
}

// ---------------------------------------------------------------------------

double singular_quadrature(const std::function<double(double)>& g, double a, double b, int node_count) {
  if (!(a < b)) throw InputError("singular quadrature needs a < b");
  if (node_count < 1) throw InputError("node count must be positive");
  double c = 0.5 * (a + b), r = 0.5 * (b - a);
  Eigen::VectorXd x = chebyshev_nodes(node_count);
  double sum = 0.0;
  for (Eigen::Index k = 0; k < x.size(); ++k) sum += g(c + r * x[k]);
  return sum * M_PI / node_count;
}

int equilibrium_node_count(const PotentialPolynomial& V) { return 64 + 8 * V.degree(); }

SupportInterval solve_support(const PotentialPolynomial& V, const SolverConfig& cfg) {
  cfg.validate();
  if (!V.convex()) throw InputError("potential is not convex on its search box");
  const int K = equilibrium_node_count(V);
  const double R0 = V.leading_radius();
  const double starts[][2] = {{0.0, R0}, {minimizer(V), R0}, {minimizer(V), 2.0 * R0}, {minimizer(V), 0.5 * R0}};

  double best_c = 0.0, best_r = R0, best_norm = INFINITY;
  int total = 0;
  for (const auto& st : starts) {
    double c = st[0], r = st[1];
    Conditions k = conditions(V, c, r, K);
    double norm = std::hypot(k.f0, k.f1);
    for (int it = 0; it < cfg.max_iter && norm > 1e-14; ++it, ++total) {
      double det = k.j00 * k.j11 - k.j01 * k.j10;
      if (det == 0.0 || !std::isfinite(det)) break;
      double dc = (k.f0 * k.j11 - k.f1 * k.j01) / det;
      double dr = (k.j00 * k.f1 - k.j10 * k.f0) / det;
      double t = 1.0;
      bool moved = false;
      for (int h = 0; h < 60; ++h, t *= 0.5) {
        double cn = c - t * dc, rn = r - t * dr;
        if (!(rn > 0.0)) continue;
        Conditions kn = conditions(V, cn, rn, K);
        double nn = std::hypot(kn.f0, kn.f1);
        if (nn < norm) {
          c = cn;
          r = rn;
          k = kn;
          norm = nn;
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }
    if (norm < best_norm) {
      best_norm = norm;
      best_c = c;
      best_r = r;
    }
    if (std::abs(k.f0) <= 1e-10 && std::abs(k.f1) <= 1e-10) break;
  }
  Conditions k = conditions(V, best_c, best_r, K);
  SupportInterval s{best_c - best_r, best_c + best_r, std::abs(k.f0), std::abs(k.f1), total};
  if (s.residual_q0 > 1e-10 || s.residual_q1 > 1e-10) {
    std::ostringstream os;
    os.precision(17);
    os << "support equations did not converge; last iterate (" << s.a << ", " << s.b << ")";
    throw NumericalError(os.str(), std::max(s.residual_q0, s.residual_q1));
  }
  return s;
}

std::vector<double> equilibrium_polynomial(const PotentialPolynomial& V, const SupportInterval& s) {
  if (!(s.a < s.b)) throw InputError("support needs a < b");
  std::vector<double> d = V.derivative_coeffs();
  const int K = equilibrium_node_count(V);
  const int deg = static_cast<int>(d.size()) - 1;  // degree of V'
  std::vector<double> moments(static_cast<std::size_t>(std::max(deg, 1)));
  for (int k = 0; k < deg; ++k)
    moments[k] = singular_quadrature([k](double mu) { return std::pow(mu, k); }, s.a, s.b, K);
  std::vector<double> p(static_cast<std::size_t>(std::max(deg, 1)), 0.0);
  for (int i = 0; i < deg; ++i) {
    double acc = 0.0;
    for (int j = i + 1; j <= deg; ++j) acc += d[j] * moments[j - 1 - i];
    p[i] = acc / (2.0 * M_PI * M_PI);
  }
  return p;
}

double equilibrium_density(const PotentialPolynomial& V, const SupportInterval& s, double lambda) {
  if (!(lambda > s.a && lambda < s.b)) return 0.0;
  return horner(equilibrium_polynomial(V, s), lambda) * std::sqrt((s.b - lambda) * (lambda - s.a));
}

double equilibrium_mass(const PotentialPolynomial& V, const SupportInterval& s) {
  std::vector<double> p = equilibrium_polynomial(V, s);
  const int K = equilibrium_node_count(V);
  double c = 0.5 * (s.a + s.b), r = 0.5 * (s.b - s.a);
  double sum = 0.0;
  for (int k = 1; k <= K; ++k) {
    double th = k * M_PI / (K + 1);
    double sn = std::sin(th);
    sum += sn * sn * horner(p, c + r * std::cos(th));
  }
  return r * r * sum * M_PI / (K + 1);
}

SpectralMeasure equilibrium_measure(const PotentialPolynomial& V, const SupportInterval& s, int count) {
  if (count < 3) throw InputError("need at least three grid points");
  std::vector<double> p = equilibrium_polynomial(V, s);
  std::vector<double> x(static_cast<std::size_t>(count)), v(x.size());
  for (int k = 0; k < count; ++k) {
    x[k] = s.a + (s.b - s.a) * k / (count - 1.0);
    double R = (s.b - x[k]) * (x[k] - s.a);
    v[k] = R > 0.0 ? horner(p, x[k]) * std::sqrt(R) : 0.0;
  }
  x.front() = s.a;
  x.back() = s.b;
  double mass = trapezoid_mass(GridDensity{x, v, Domain::Real});
  for (double& y : v) y /= mass;
  return SpectralMeasure::density(std::move(x), std::move(v));
}

// ---------------------------------------------------------------------------

double monomial_integral(double alpha) {
  if (!(alpha > -1.0)) throw InputError("exponent must exceed -1");
  return 0.5 * std::sqrt(M_PI) * std::tgamma(0.5 * (alpha + 1.0)) / std::tgamma(0.5 * alpha + 1.0);
}

double monomial_support(double alpha) {
  if (!(alpha >= 2.0) || !std::isfinite(alpha)) throw InputError("exponent must be at least 2");
  return std::pow(M_PI / monomial_integral(alpha), 1.0 / alpha);
}

double monomial_density(double alpha, double lambda) {
  double a = monomial_support(alpha);
  double x = std::abs(lambda);
  if (x >= a) return 0.0;
  // t = sqrt(lambda^2 + v^2) removes the inverse square root at t = |lambda|
  double top = std::sqrt(a * a - x * x);
  double e = 0.5 * (alpha - 2.0);
  double I = integrate([&](double v) { return std::pow(x * x + v * v, e); }, 0.0, top, 1e-14);
  return I / (2.0 * M_PI * monomial_integral(alpha - 1.0));
}

SingularEquationReport verify_singular_equation(const PotentialPolynomial& V, const SupportInterval& s,
                                                const std::function<double(double)>& density, int points) {
  if (points < 1) throw InputError("need at least one test point");
  SingularEquationReport rep;
  double c = 0.5 * (s.a + s.b), r = 0.5 * (s.b - s.a);
  for (int k = 0; k < points; ++k) {
    double lambda = s.a + (s.b - s.a) * (k + 1.0) / (points + 1.0);
    double rl = density(lambda);
    double tl = std::acos(std::clamp((lambda - c) / r, -1.0, 1.0));
    auto g = [&](double th) {
      double mu = c + r * std::cos(th);
      if (mu == lambda) return 0.0;
      return (density(mu) - rl) / (mu - lambda) * r * std::sin(th);
    };
    double pv = integrate(g, 0.0, tl, 1e-12) + integrate(g, tl, M_PI, 1e-12);
    pv += rl * std::log((s.b - lambda) / (lambda - s.a));
    double dev = std::abs(pv + 0.5 * V.derivative(lambda));
    rep.points.push_back(lambda);
    rep.deviation.push_back(dev);
    rep.max_deviation = std::max(rep.max_deviation, dev);
  }
  return rep;
}

SingularEquationReport verify_singular_equation(const PotentialPolynomial& V, const SupportInterval& s,
                                                const GridDensity& density, int points) {
  if (points < 1) throw InputError("need at least one test point");
  if (density.domain != Domain::Real) throw InputError("density must live on the real line");
  const auto& x = density.grid;
  const auto& v = density.values;
  double mass = trapezoid_mass(density);
  auto safe_log = [](double d) { return d == 0.0 ? 0.0 : std::log(std::abs(d)); };
  SingularEquationReport rep;
  for (int k = 0; k < points; ++k) {
    double lambda = s.a + (s.b - s.a) * (k + 1.0) / (points + 1.0);
    // Exact principal value for the piecewise-linear interpolant.
    double pv = 0.0;
    for (std::size_t j = 0; j + 1 < x.size(); ++j) {
      double h = x[j + 1] - x[j];
      double slope = (v[j + 1] - v[j]) / h;
      double at = v[j] + slope * (lambda - x[j]);
      pv += slope * h + at * (safe_log(x[j + 1] - lambda) - safe_log(x[j] - lambda));
    }
    pv /= mass;
    double dev = std::abs(pv + 0.5 * V.derivative(lambda));
    rep.points.push_back(lambda);
    rep.deviation.push_back(dev);
    rep.max_deviation = std::max(rep.max_deviation, dev);
  }
  return rep;
}

}  // namespace rmt
