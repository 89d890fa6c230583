#pragma once

#include <span>
#include <vector>

#include "rmt/measures.hpp"
#include "rmt/solver_config.hpp"

namespace rmt {

/// Solution of the subordination system at one z.
struct SubordinationState {
  Complex z;
  Complex f;
  Complex delta_A;
  Complex delta_B;
  Complex omega_A;  // z - delta_B / f, with f = f_A(omega_A)
  Complex omega_B;  // z - delta_A / f, with f = f_B(omega_B)
  int iterations = 0;
  double residual = 0.0;  // max of the three equation residuals
};

struct Selfenergy {
  Complex sigma;  // f(z) = -1 / (z + sigma)
};

struct AdditivityReport {
  std::vector<Complex> z;
  std::vector<Complex> s;          // f(z) of the sum
  std::vector<double> deviation;   // |R(s) - R_A(s) - R_B(s)|
  double max_deviation = 0.0;
};

/// Iterates omega_B <- z + h_A(omega_A), omega_A <- z + h_B(omega_B) with
/// h(w) = -1/f(w) - w, continued down from Im z = y_start and Newton polished.
SubordinationState solve_free_addition(Complex z, const ComplexEvaluator& fA, const ComplexEvaluator& fB,
                                       const SolverConfig& cfg = {});
SubordinationState solve_free_addition(Complex z, const SpectralMeasure& A, const SpectralMeasure& B,
                                       const SolverConfig& cfg = {});

/// Restricts both measures to [-T, T], doubling T from T0 until f moves by less than tol
/// or both supports fit.
SubordinationState solve_free_addition_truncated(Complex z, const SpectralMeasure& A, const SpectralMeasure& B,
                                                 double T0, const SolverConfig& cfg = {});

ComplexEvaluator free_addition_evaluator(const ComplexEvaluator& fA, const ComplexEvaluator& fB,
                                         const SolverConfig& cfg = {});

Selfenergy selfenergy_of(const ComplexEvaluator& f, Complex z);

/// R(s) = -1/s - z(s), z(s) from Newton inversion of f(z) = s started at -1/s.
Complex r_transform(const ComplexEvaluator& f, Complex s, const SolverConfig& cfg = {});
Complex r_transform(const SpectralMeasure& m, Complex s, const SolverConfig& cfg = {});

AdditivityReport verify_r_additivity(const ComplexEvaluator& fA, const ComplexEvaluator& fB,
                                     std::span<const Complex> z_points, const SolverConfig& cfg = {});

}  // namespace rmt
