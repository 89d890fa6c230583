#pragma once

#include <complex>
#include <functional>

#include "rmt/measures.hpp"
#include "rmt/solver_config.hpp"

namespace rmt {

struct FixedPointResult {
  Complex f;
  int iterations = 0;    // total over all continuation rungs
  double residual = 0.0; // |f - T(f)| / max(1, |f|) at the target z
};

/// Semicircle law of variance beta*w^2, supported on |lambda| <= 2 sqrt(beta) w.
double semicircle_density(double lambda, double w, int beta = 2);
double semicircle_cdf(double lambda, double w, int beta = 2);
/// Root of beta w^2 f^2 + z f + 1 = 0 with Im f Im z > 0.
Complex semicircle_stieltjes(Complex z, double w, int beta = 2);
Complex semicircle_stieltjes_derivative(Complex z, double w, int beta = 2);

/// Laguerre law with t = beta a^2, supported on (0, 4t].
double laguerre_density(double lambda, double a, int beta = 2);
double laguerre_cdf(double lambda, double a, int beta = 2);
/// Root of t z f^2 + z f + 1 = 0 with Im f Im z > 0.
Complex laguerre_stieltjes(Complex z, double a, int beta = 2);
Complex laguerre_stieltjes_derivative(Complex z, double a, int beta = 2);

/// Transform of the point mass at 0, f(z) = -1/z.
ComplexEvaluator point_mass_transform();

/// Fixed point map T(z, f).
using FixedPointMap = std::function<Complex(Complex, Complex)>;

/// Solves f = T(z, f) by damped iteration started at -1/z, continued down from
/// Im z = y_start, with Newton polishing. Throws NumericalError on failure.
FixedPointResult solve_fixed_point(Complex z, const FixedPointMap& map, const SolverConfig& cfg = {});

/// Same, with a caller-chosen start value at the first rung.
FixedPointResult solve_fixed_point(Complex z, const FixedPointMap& map, const SolverConfig& cfg,
                                   const std::function<Complex(Complex)>& start);

/// \int t sigma(dt) / (1 + t f). Atoms summed, densities by trapezoid on their grid.
Complex population_integral(const SpectralMeasure& sigma, Complex f);

/// f = f0(z - c \int t sigma(dt)/(1 + t f)).
FixedPointResult solve_mp(Complex z, double c, const SpectralMeasure& sigma,
                          const ComplexEvaluator& f0 = point_mass_transform(),
                          const SolverConfig& cfg = {});

/// f = f0(z + 2 w^2 f).
FixedPointResult solve_deformed_semicircle(Complex z, double w, const ComplexEvaluator& f0,
                                           const SolverConfig& cfg = {});

/// f = f0(z - 2 a^2 / (1 + 2 a^2 f)).
FixedPointResult solve_deformed_laguerre(Complex z, double a, const ComplexEvaluator& f0,
                                         const SolverConfig& cfg = {});

/// Herglotz transform of the uniform law on the circle: 1 inside, -1 outside.
Complex circular_limit_herglotz(Complex z);

/// Evaluators wrapping the solvers, for inversion and free convolution.
ComplexEvaluator mp_evaluator(double c, const SpectralMeasure& sigma,
                              const ComplexEvaluator& f0 = point_mass_transform(),
                              const SolverConfig& cfg = {});
ComplexEvaluator deformed_semicircle_evaluator(double w, const ComplexEvaluator& f0,
                                               const SolverConfig& cfg = {});
ComplexEvaluator deformed_laguerre_evaluator(double a, const ComplexEvaluator& f0,
                                             const SolverConfig& cfg = {});

}  // namespace rmt
