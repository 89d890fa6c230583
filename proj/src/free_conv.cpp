#include "rmt/free_conv.hpp"

#include <algorithm>
#include <cmath>

#include "rmt/error.hpp"
#include "rmt/limit_laws.hpp"

namespace rmt {

namespace {

Complex h_of(const ComplexEvaluator& f, Complex w) {
  Complex v = f(w);
  if (std::abs(v) < 1e-14) throw NumericalError("degenerate transform", std::abs(v));
  return -1.0 / v - w;
}

double scaled(Complex a, Complex b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

SubordinationState solve_free_addition(Complex z, const ComplexEvaluator& fA, const ComplexEvaluator& fB,
                                       const SolverConfig& cfg) {
  // One sweep of the alternating update, as a map on omega_A.
  auto sweep = [&](Complex zz, Complex wa) {
    Complex wb = zz + h_of(fA, wa);
    return zz + h_of(fB, wb);
  };
  FixedPointResult fp = solve_fixed_point(z, sweep, cfg, [](Complex zz) { return zz; });

  SubordinationState st;
  st.z = z;
  st.iterations = fp.iterations;
  st.omega_A = fp.f;
  st.omega_B = z + h_of(fA, st.omega_A);
  st.f = fA(st.omega_A);
  if (std::abs(st.f) < 1e-14) throw NumericalError("degenerate transform", std::abs(st.f));
  st.delta_B = (z - st.omega_A) * st.f;
  st.delta_A = (z - st.omega_B) * st.f;
  Complex fb = fB(st.omega_B);
  double r_fixed = fp.residual;
  double r_b = scaled(fb, st.f);
  double r_sum = std::abs(z * st.f - st.delta_A - st.delta_B + 1.0) / std::max(1.0, std::abs(z * st.f));
  st.residual = std::max({r_fixed, r_b, r_sum});
  if (!(st.f.imag() * z.imag() > 0.0)) throw NumericalError("subordination left the Nevanlinna class", st.residual);
  return st;
}

SubordinationState solve_free_addition(Complex z, const SpectralMeasure& A, const SpectralMeasure& B,
                                       const SolverConfig& cfg) {
  return solve_free_addition(z, stieltjes_evaluator(A), stieltjes_evaluator(B), cfg);
}

SubordinationState solve_free_addition_truncated(Complex z, const SpectralMeasure& A, const SpectralMeasure& B,
                                                 double T0, const SolverConfig& cfg) {
  if (!(T0 > 0.0)) throw InputError("truncation level must be positive");
  auto covers = [](const SpectralMeasure& m, double T) {
    auto [lo, hi] = m.support();
    return lo >= -T && hi <= T;
  };
  SubordinationState prev{};
  bool have_prev = false;
  for (double T = T0; T < 1e300; T *= 2.0) {
    SubordinationState st = solve_free_addition(z, truncate(A, T), truncate(B, T), cfg);
    if ((covers(A, T) && covers(B, T)) || (have_prev && std::abs(st.f - prev.f) < cfg.tol)) return st;
    prev = st;
    have_prev = true;
  }
  throw NumericalError("truncation did not stabilize", 0.0);
}

ComplexEvaluator free_addition_evaluator(const ComplexEvaluator& fA, const ComplexEvaluator& fB,
                                         const SolverConfig& cfg) {
  return ComplexEvaluator([=](Complex z) { return solve_free_addition(z, fA, fB, cfg).f; });
}

Selfenergy selfenergy_of(const ComplexEvaluator& f, Complex z) {
  Complex v = f(z);
  if (v == 0.0) throw InputError("transform vanishes");
  return {-1.0 / v - z};
}

Complex r_transform(const ComplexEvaluator& f, Complex s, const SolverConfig& cfg) {
  if (s.imag() == 0.0 || std::abs(s) == 0.0) throw InputError("s must be non-real");
  Complex z = -1.0 / s;
  double r = std::abs(f(z) - s);
  const double target = cfg.tol * std::max(1.0, std::abs(s));
  int extra = 0;  // Newton steps taken after reaching the target
  for (int it = 0; it < cfg.max_iter; ++it) {
    if (r <= target && ++extra > 3) return -1.0 / s - z;
    Complex step = (f(z) - s) / f.derivative(z);
    // Halve the step until it stays in the half-plane of s and reduces the mismatch.
    double scale = 1.0;
    bool moved = false;
    for (int k = 0; k < 50; ++k, scale *= 0.5) {
      Complex zn = z - scale * step;
      if (!(zn.imag() * s.imag() > 0.0)) continue;
      double rn = std::abs(f(zn) - s);
      if (rn < r) {
        z = zn;
        r = rn;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  if (r <= target) return -1.0 / s - z;
  throw NumericalError("R-transform inversion did not converge", r);
}

Complex r_transform(const SpectralMeasure& m, Complex s, const SolverConfig& cfg) {
  return r_transform(stieltjes_evaluator(m), s, cfg);
}

AdditivityReport verify_r_additivity(const ComplexEvaluator& fA, const ComplexEvaluator& fB,
                                     std::span<const Complex> z_points, const SolverConfig& cfg) {
  AdditivityReport rep;
  for (Complex z : z_points) {
    SubordinationState st = solve_free_addition(z, fA, fB, cfg);
    Complex r_sum = -1.0 / st.f - z;
    Complex ra = r_transform(fA, st.f, cfg);
    Complex rb = r_transform(fB, st.f, cfg);
    double dev = std::abs(r_sum - ra - rb);
    rep.z.push_back(z);
    rep.s.push_back(st.f);
    rep.deviation.push_back(dev);
    rep.max_deviation = std::max(rep.max_deviation, dev);
  }
  return rep;
}

}  // namespace rmt
