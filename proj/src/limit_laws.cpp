#include "rmt/limit_laws.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "rmt/error.hpp"

namespace rmt {

namespace {

void require_off_axis(Complex z) {
  if (z.imag() == 0.0 || !std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw InputError("real spectral parameter");
}

void require_beta(int beta) {
  if (beta != 1 && beta != 2 && beta != 4) throw InputError("beta must be 1, 2 or 4");
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw InputError(std::string(name) + " must be positive");
}

bool right_half_plane(Complex f, Complex z) { return f.imag() * z.imag() > 0.0; }

bool finite(Complex f) { return std::isfinite(f.real()) && std::isfinite(f.imag()); }

struct RungResult {
  Complex f;
  int iterations;
  double residual;
};

RungResult iterate_rung(Complex z, Complex f, const FixedPointMap& map, const SolverConfig& cfg, bool polish) {
  auto residual = [&](Complex g, Complex& tg) {
    tg = map(z, g);
    return std::abs(tg - g) / std::max(1.0, std::abs(g));
  };
  Complex tf;
  double r = residual(f, tf);
  int it = 0;
  int extra = polish ? 2 : 0;  // Newton steps past the tolerance, kept only if they help
  for (; it < cfg.max_iter && (r > cfg.tol || extra-- > 0); ++it) {
    bool stepped = false;
    if (r == 0.0) break;
    if (r < 1e-2) {
      double h = 1e-6 * std::max(std::abs(f), 1e-3);
      Complex slope = (map(z, f + h) - map(z, f - h)) / (2.0 * h);
      Complex fn = f - (f - tf) / (1.0 - slope);
      if (finite(fn) && right_half_plane(fn, z)) {
        Complex tn;
        double rn = residual(fn, tn);
        if (rn < r) {
          f = fn;
          tf = tn;
          r = rn;
          stepped = true;
        }
      }
    }
    if (!stepped && r <= cfg.tol) break;
    if (!stepped) {
      Complex fn = f + cfg.damping * (tf - f);
      if (!finite(fn)) break;
      f = fn;
      r = residual(f, tf);
    }
  }
  return {f, it, r};
}

}  // namespace

void SolverConfig::validate() const {
  if (!(tol > 0.0)) throw InputError("solver tol must be positive");
  if (max_iter < 1) throw InputError("solver max_iter must be at least 1");
  if (!(damping > 0.0 && damping <= 1.0)) throw InputError("solver damping must lie in (0, 1]");
  if (!(epsilon_inversion > 0.0)) throw InputError("solver epsilon_inversion must be positive");
  if (!(y_min > 0.0) || !(y_min <= y_start)) throw InputError("solver needs 0 < y_min <= y_start");
}

// ---------------------------------------------------------------------------

double semicircle_density(double lambda, double w, int beta) {
  require_positive(w, "w");
  require_beta(beta);
  double v = beta * w * w;
  double d = 4.0 * v - lambda * lambda;
  return d > 0.0 ? std::sqrt(d) / (2.0 * M_PI * v) : 0.0;
}

double semicircle_cdf(double lambda, double w, int beta) {
  require_positive(w, "w");
  require_beta(beta);
  double r = 2.0 * std::sqrt(static_cast<double>(beta)) * w;
  double x = std::clamp(lambda / r, -1.0, 1.0);
  double phi = std::asin(x);
  return std::clamp(0.5 + (phi + x * std::sqrt(1.0 - x * x)) / M_PI, 0.0, 1.0);
}

Complex semicircle_stieltjes(Complex z, double w, int beta) {
  require_off_axis(z);
  require_positive(w, "w");
  require_beta(beta);
  double v = beta * w * w;
  double r = 2.0 * std::sqrt(v);
  Complex s = std::sqrt(z - r) * std::sqrt(z + r);
  Complex f = -2.0 / (z + s);
  f -= (v * f * f + z * f + 1.0) / (2.0 * v * f + z);
  return f;
}

Complex semicircle_stieltjes_derivative(Complex z, double w, int beta) {
  Complex f = semicircle_stieltjes(z, w, beta);
  double v = beta * w * w;
  return -f / (2.0 * v * f + z);
}

double laguerre_density(double lambda, double a, int beta) {
  require_positive(a, "a");
  require_beta(beta);
  double t = beta * a * a;
  if (!(lambda > 0.0) || lambda >= 4.0 * t) return 0.0;
  return std::sqrt((4.0 * t - lambda) / lambda) / (2.0 * M_PI * t);
}

double laguerre_cdf(double lambda, double a, int beta) {
  require_positive(a, "a");
  require_beta(beta);
  double edge = 4.0 * beta * a * a;
  double u = std::clamp(lambda / edge, 0.0, 1.0);
  double theta = std::asin(std::sqrt(u));
  return std::clamp(2.0 / M_PI * (theta + std::sqrt(u * (1.0 - u))), 0.0, 1.0);
}

Complex laguerre_stieltjes(Complex z, double a, int beta) {
  require_off_axis(z);
  require_positive(a, "a");
  require_beta(beta);
  double t = beta * a * a;
  Complex s = std::sqrt(z) * std::sqrt(z - 4.0 * t);
  Complex f = -2.0 / (z + s);
  f -= (t * z * f * f + z * f + 1.0) / (2.0 * t * z * f + z);
  return f;
}

Complex laguerre_stieltjes_derivative(Complex z, double a, int beta) {
  Complex f = laguerre_stieltjes(z, a, beta);
  double t = beta * a * a;
  return -(t * f * f + f) / (2.0 * t * z * f + z);
}

ComplexEvaluator point_mass_transform() {
  return ComplexEvaluator([](Complex z) { return -1.0 / z; }, [](Complex z) { return 1.0 / (z * z); });
}

FixedPointResult solve_fixed_point(Complex z, const FixedPointMap& map, const SolverConfig& cfg) {
  return solve_fixed_point(z, map, cfg, [](Complex zz) { return -1.0 / zz; });
}

FixedPointResult solve_fixed_point(Complex z, const FixedPointMap& map, const SolverConfig& cfg,
                                   const std::function<Complex(Complex)>& start) {
  cfg.validate();
  require_off_axis(z);
  double sign = z.imag() > 0.0 ? 1.0 : -1.0;
  double target = std::abs(z.imag());

  std::vector<double> rungs;
  if (target < cfg.y_start) {
    double floor = std::max(target, cfg.y_min);
    for (double y = cfg.y_start; y > floor; y *= 0.25) rungs.push_back(y);
    if (floor > target) rungs.push_back(floor);
  }
  rungs.push_back(target);

  Complex f = start(Complex(z.real(), sign * rungs.front()));
  int total = 0;
  RungResult last{f, 0, 0.0};
  for (std::size_t k = 0; k < rungs.size(); ++k) {
    Complex zk(z.real(), sign * rungs[k]);
    last = iterate_rung(zk, f, map, cfg, k + 1 == rungs.size());
    total += last.iterations;
    if (finite(last.f) && right_half_plane(last.f, zk)) f = last.f;
  }
  if (!(last.residual <= cfg.tol)) throw NumericalError("fixed point did not converge", last.residual);
  if (!right_half_plane(last.f, z)) throw NumericalError("fixed point left the Nevanlinna class", last.residual);
  return {last.f, total, last.residual};
}

Complex population_integral(const SpectralMeasure& sigma, Complex f) {
  auto term = [&](double t) {
    Complex d = 1.0 + t * f;
    if (std::abs(d) < 1e-12) throw NumericalError("pole in integrand", std::abs(d));
    return t / d;
  };
  if (auto a = sigma.as_atoms()) {
    Complex sum = 0.0;
    for (std::size_t k = 0; k < a->locations.size(); ++k) sum += a->weights[k] * term(a->locations[k]);
    return sum;
  }
  if (auto g = sigma.as_grid()) {
    Complex sum = 0.0;
    double mass = 0.0;
    for (std::size_t k = 0; k + 1 < g->grid.size(); ++k) {
      double h = 0.5 * (g->grid[k + 1] - g->grid[k]);
      sum += h * (g->values[k] * term(g->grid[k]) + g->values[k + 1] * term(g->grid[k + 1]));
      mass += h * (g->values[k] + g->values[k + 1]);
    }
    return sum / mass;
  }
  // t/(1+tf) = (1 - 1/(1+tf))/f and \int sigma(dt)/(1+tf) = s(-1/f)/f
  Complex s = stieltjes_eval(sigma, -1.0 / f);
  return (1.0 - s / f) / f;
}

FixedPointResult solve_mp(Complex z, double c, const SpectralMeasure& sigma, const ComplexEvaluator& f0,
                          const SolverConfig& cfg) {
  if (!(c >= 0.0) || !std::isfinite(c)) throw InputError("c must be nonnegative");
  if (sigma.domain() != Domain::Real) throw InputError("population law must live on the real line");
  return solve_fixed_point(
      z, [&](Complex zz, Complex f) { return f0(zz - c * population_integral(sigma, f)); }, cfg);
}

FixedPointResult solve_deformed_semicircle(Complex z, double w, const ComplexEvaluator& f0,
                                           const SolverConfig& cfg) {
  if (!(w >= 0.0) || !std::isfinite(w)) throw InputError("w must be nonnegative");
  double v = 2.0 * w * w;
  return solve_fixed_point(z, [&](Complex zz, Complex f) { return f0(zz + v * f); }, cfg);
}

FixedPointResult solve_deformed_laguerre(Complex z, double a, const ComplexEvaluator& f0,
                                         const SolverConfig& cfg) {
  if (!(a >= 0.0) || !std::isfinite(a)) throw InputError("a must be nonnegative");
  double t = 2.0 * a * a;
  return solve_fixed_point(
      z,
      [&](Complex zz, Complex f) {
        Complex d = 1.0 + t * f;
        if (std::abs(d) < 1e-12) throw NumericalError("pole in integrand", std::abs(d));
        return f0(zz - t / d);
      },
      cfg);
}

Complex circular_limit_herglotz(Complex z) {
  if (std::abs(std::abs(z) - 1.0) <= 1e-12) throw InputError("on unit circle");
  return std::abs(z) < 1.0 ? Complex(1.0) : Complex(-1.0);
}

ComplexEvaluator mp_evaluator(double c, const SpectralMeasure& sigma, const ComplexEvaluator& f0,
                              const SolverConfig& cfg) {
  return ComplexEvaluator([=](Complex z) { return solve_mp(z, c, sigma, f0, cfg).f; });
}

ComplexEvaluator deformed_semicircle_evaluator(double w, const ComplexEvaluator& f0, const SolverConfig& cfg) {
  return ComplexEvaluator([=](Complex z) { return solve_deformed_semicircle(z, w, f0, cfg).f; });
}

ComplexEvaluator deformed_laguerre_evaluator(double a, const ComplexEvaluator& f0, const SolverConfig& cfg) {
  return ComplexEvaluator([=](Complex z) { return solve_deformed_laguerre(z, a, f0, cfg).f; });
}

}  // namespace rmt
