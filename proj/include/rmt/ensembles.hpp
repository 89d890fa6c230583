#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "rmt/equilibrium.hpp"
#include "rmt/error.hpp"
#include "rmt/rng.hpp"

namespace rmt {

enum class Family { GUE, GOE, WignerGeneral, Laguerre, SampleCovariance, HaarUnitary, FreeSum, Deformed, InvariantLogGas };

Family parse_family(std::string_view name);
std::string_view to_string(Family f);

enum class WignerNormalization { Hermitian, RealSymmetricDoubledDiagonal };

WignerNormalization parse_normalization(std::string_view name);
std::string_view to_string(WignerNormalization n);

struct McmcParams {
  long sweeps = 10000;          // recorded sweeps after burn-in
  long burn_in = 100000;        // sweeps discarded
  double proposal_scale = 0.0;  // 0 selects 0.1 / sqrt(n)
  int thin = 10;                // keep every thin-th sweep

  double step(int n) const;
  void validate() const;
};

struct EnsembleSpec {
  Family family = Family::GUE;
  int n = 0;
  double w = 1.0;  // GUE, GOE, WignerGeneral
  double a = 1.0;  // Laguerre
  EntryLaw law = EntryLaw::ComplexGaussian;
  WignerNormalization normalization = WignerNormalization::Hermitian;
  int m = 0;                       // SampleCovariance columns
  std::vector<double> t_values;    // SampleCovariance population, length m
  std::vector<double> diag_a;      // FreeSum
  std::vector<double> diag_b;      // FreeSum
  std::vector<double> base_diagonal;         // Deformed: H0 = diag(...) when nonempty
  std::shared_ptr<const EnsembleSpec> base;  // Deformed: otherwise H0 sampled from this
  std::shared_ptr<const EnsembleSpec> noise; // Deformed
  std::optional<PotentialPolynomial> potential;  // InvariantLogGas
  McmcParams mcmc;

  /// Throws InputError when a family parameter is missing or out of range.
  void validate() const;
};

/// Hermitian (complex) or real symmetric matrix with the seed it came from.
struct HermitianSample {
  std::variant<Eigen::MatrixXd, Eigen::MatrixXcd> matrix;
  std::uint64_t seed = 0;

  Eigen::Index n() const;
  bool is_real() const { return matrix.index() == 0; }
};

HermitianSample sample_gue(int n, double w, std::uint64_t seed);
HermitianSample sample_goe(int n, double w, std::uint64_t seed);
HermitianSample sample_wigner(int n, double w, EntryLaw law, WignerNormalization norm, std::uint64_t seed);
HermitianSample sample_laguerre(int n, double a, std::uint64_t seed);
HermitianSample sample_cov(int n, int m, std::span<const double> t_values, EntryLaw law, std::uint64_t seed);
Eigen::MatrixXcd sample_haar_unitary(int n, std::uint64_t seed);
std::vector<double> sample_cue_angles(int n, std::uint64_t seed);
HermitianSample sample_free_sum(std::span<const double> diag_a, std::span<const double> diag_b, std::uint64_t seed);
HermitianSample sample_deformed(const HermitianSample& base, const EnsembleSpec& noise, std::uint64_t seed);
HermitianSample sample_deformed(const EnsembleSpec& spec, std::uint64_t seed);

struct LogGasRun {
  std::vector<std::vector<double>> samples;  // sorted configurations, one per kept sweep
  double acceptance_rate = 0.0;
};

/// Metropolis chain on the log-gas prod |l_i - l_j|^2 exp(-n sum V(l_i)).
LogGasRun run_log_gas(const PotentialPolynomial& V, int n, const McmcParams& mcmc, std::uint64_t seed);
/// Final configuration of a chain, sorted.
std::vector<double> sample_invariant(const PotentialPolynomial& V, int n, const McmcParams& mcmc, std::uint64_t seed);

/// Matrix families only.
HermitianSample sample_matrix(const EnsembleSpec& spec, std::uint64_t seed);
/// Sorted eigenvalues (eigenangles for HaarUnitary, chain draw for InvariantLogGas).
std::vector<double> sample_spectrum(const EnsembleSpec& spec, std::uint64_t seed);

/// Ascending eigenvalues of a self-adjoint matrix (lower triangle is read).
template <typename Derived>
Eigen::VectorXd eigenvalues(const Eigen::MatrixBase<Derived>& h) {
  if (h.rows() != h.cols()) throw InputError("matrix must be square");
  if (!h.allFinite()) throw InputError("non-finite matrix entries");
  using Plain = typename Derived::PlainObject;
  Eigen::SelfAdjointEigenSolver<Plain> solver(h.derived(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolver failed");
  return solver.eigenvalues();
}

std::vector<double> eigenvalues(const HermitianSample& h);

/// (G^{-1} + a a^*)^{-1} from G = (C - z)^{-1} by the rank-one formula.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> rank_one_update(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& g,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& a, Complex z) {
  if (z.imag() == 0.0) throw InputError("real spectral parameter");
  if (g.rows() != g.cols() || g.rows() != a.size()) throw InputError("dimension mismatch");
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> ga = g * a;
  Eigen::Matrix<Scalar, 1, Eigen::Dynamic> ag = a.adjoint() * g;
  Scalar denom = Scalar(1) + a.dot(ga);  // 1 + (G a, a)
  if (std::abs(denom) < 1e-14) throw NumericalError("singular update", std::abs(denom));
  return g - ga * ag / denom;
}

/// (1/n) sum 1/(lambda_i - z).
Complex spectrum_stieltjes(std::span<const double> eigenvalues, Complex z);
/// (1/n) Tr (M - z)^{-1} at each z, from one tridiagonal reduction of M.
std::vector<Complex> resolvent_traces(const HermitianSample& h, std::span<const Complex> z);
/// (1/n) sum (e^{i t} + z)/(e^{i t} - z).
Complex spectrum_herglotz(std::span<const double> angles, Complex z);
/// 1 + (2z/n) Tr (U - z)^{-1}, by LU of U - z.
Complex unitary_herglotz(const Eigen::MatrixXcd& u, Complex z);

}  // namespace rmt
