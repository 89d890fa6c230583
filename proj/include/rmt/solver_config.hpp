#pragma once

namespace rmt {

/// Tolerances and continuation schedule shared by all fixed-point and Newton solvers.
struct SolverConfig {
  double tol = 1e-12;               // scaled residual |f - rhs(f)| / max(1, |f|)
  int max_iter = 10000;             // per continuation rung
  double damping = 0.5;             // weight of the new iterate, in (0, 1]
  double epsilon_inversion = 1e-4;  // distance to the real axis for density inversion
  double y_start = 1.0;             // first rung of the Im z ladder
  double y_min = 1e-4;              // lowest intermediate rung

  /// Throws InputError when an invariant is violated.
  void validate() const;
};

}  // namespace rmt
