#include "rmt/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rmt {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

void require_n(int n) {
  if (n < 1) throw InputError("matrix size must be at least 1");
}

void require_scale(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw InputError(std::string(name) + " must be positive");
}

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

// Real symmetric, off-diagonal variance w^2 and diagonal variance 2 w^2.
Eigen::MatrixXd real_wigner(int n, double w, EntryLaw law, std::uint64_t seed) {
  Engine eng(seed);
  EntrySampler draw(law, eng);
  Eigen::MatrixXd m(n, n);
  const double s = w / std::sqrt(static_cast<double>(n));
  for (int j = 0; j < n; ++j) {
    m(j, j) = M_SQRT2 * s * draw.real();
    for (int k = j + 1; k < n; ++k) m(k, j) = m(j, k) = s * draw.real();
  }
  return m;
}

// Hermitian, W_jk = w (x + i y) off the diagonal and sqrt(2) w x on it.
Eigen::MatrixXcd complex_wigner(int n, double w, EntryLaw law, std::uint64_t seed) {
  Engine eng(seed);
  EntrySampler draw(law, eng);
  Eigen::MatrixXcd m(n, n);
  const double s = w / std::sqrt(static_cast<double>(n));
  for (int j = 0; j < n; ++j) {
    m(j, j) = M_SQRT2 * s * draw.real();
    for (int k = j + 1; k < n; ++k) {
      double x = draw.real();
      double y = draw.real();
      m(k, j) = Complex(s * x, s * y);
      m(j, k) = std::conj(m(k, j));
    }
  }
  return m;
}

template <typename M>
M hermitian_part(const M& h) {
  return (h + h.adjoint()) / 2.0;
}

double log_gas_potential_step(const PotentialPolynomial& V, double from, double to) { return V(to) - V(from); }

}  // namespace

// ---------------------------------------------------------------------------

Family parse_family(std::string_view name) {
  if (name == "gue") return Family::GUE;
  if (name == "goe") return Family::GOE;
  if (name == "wigner") return Family::WignerGeneral;
  if (name == "laguerre") return Family::Laguerre;
  if (name == "sample_covariance") return Family::SampleCovariance;
  if (name == "haar_unitary") return Family::HaarUnitary;
  if (name == "free_sum") return Family::FreeSum;
  if (name == "deformed") return Family::Deformed;
  if (name == "invariant") return Family::InvariantLogGas;
  throw InputError("unknown ensemble family '" + std::string(name) + "'");
}

std::string_view to_string(Family f) {
  switch (f) {
    case Family::GUE: return "gue";
    case Family::GOE: return "goe";
    case Family::WignerGeneral: return "wigner";
    case Family::Laguerre: return "laguerre";
    case Family::SampleCovariance: return "sample_covariance";
    case Family::HaarUnitary: return "haar_unitary";
    case Family::FreeSum: return "free_sum";
    case Family::Deformed: return "deformed";
    case Family::InvariantLogGas: return "invariant";
  }
  return "";
}

WignerNormalization parse_normalization(std::string_view name) {
  if (name == "hermitian") return WignerNormalization::Hermitian;
  if (name == "real-symmetric-doubled-diagonal") return WignerNormalization::RealSymmetricDoubledDiagonal;
  throw InputError("unknown normalization '" + std::string(name) + "'");
}

std::string_view to_string(WignerNormalization n) {
  return n == WignerNormalization::Hermitian ? "hermitian" : "real-symmetric-doubled-diagonal";
}

double McmcParams::step(int n) const {
  return proposal_scale > 0.0 ? proposal_scale : 0.1 / std::sqrt(static_cast<double>(n));
}

void McmcParams::validate() const {
  if (sweeps < 1) throw InputError("mcmc sweeps must be at least 1");
  if (burn_in < 0) throw InputError("mcmc burn-in must be nonnegative");
  if (thin < 1) throw InputError("mcmc thinning must be at least 1");
  if (proposal_scale < 0.0 || !std::isfinite(proposal_scale)) throw InputError("mcmc proposal scale must be nonnegative");
}

void EnsembleSpec::validate() const {
  if (family != Family::FreeSum) require_n(n);
  switch (family) {
    case Family::GUE:
    case Family::GOE:
      require_scale(w, "w");
      break;
    case Family::WignerGeneral:
      require_scale(w, "w");
      if (normalization == WignerNormalization::RealSymmetricDoubledDiagonal && is_complex(law))
        throw InputError("real symmetric normalization needs a real entry law");
      break;
    case Family::Laguerre:
      require_scale(a, "a");
      break;
    case Family::SampleCovariance:
      if (m < 1) throw InputError("sample covariance needs m >= 1");
      if (static_cast<int>(t_values.size()) != m) throw InputError("t_values must have m entries");
      for (double t : t_values)
        if (!std::isfinite(t)) throw InputError("non-finite population value");
      break;
    case Family::HaarUnitary:
      break;
    case Family::FreeSum:
      if (diag_a.empty() || diag_a.size() != diag_b.size()) throw InputError("free sum diagonals must have equal nonzero length");
      break;
    case Family::Deformed:
      if (!noise) throw InputError("deformed ensemble needs a noise spec");
      if (base_diagonal.empty() && !base) throw InputError("deformed ensemble needs a base");
      if (!base_diagonal.empty() && static_cast<int>(base_diagonal.size()) != n)
        throw InputError("dimension mismatch between base diagonal and n");
      if (base && base->n != n) throw InputError("dimension mismatch between base and n");
      if (noise->n != n) throw InputError("dimension mismatch between noise and n");
      if (base) base->validate();
      if (!(noise->family == Family::GUE || noise->family == Family::GOE || noise->family == Family::WignerGeneral) ||
          noise->w != 0.0)
        noise->validate();
      break;
    case Family::InvariantLogGas:
      if (!potential) throw InputError("invariant ensemble needs a potential");
      if (!potential->convex()) throw InputError("potential is not convex");
      mcmc.validate();
      break;
  }
}

Eigen::Index HermitianSample::n() const {
  return std::visit([](const auto& m) { return m.rows(); }, matrix);
}

// ---------------------------------------------------------------------------

HermitianSample sample_gue(int n, double w, std::uint64_t seed) {
  require_n(n);
  require_scale(w, "w");
  return {complex_wigner(n, w, EntryLaw::RealGaussian, seed), seed};
}

HermitianSample sample_goe(int n, double w, std::uint64_t seed) {
  require_n(n);
  require_scale(w, "w");
  return {real_wigner(n, w, EntryLaw::RealGaussian, seed), seed};
}

HermitianSample sample_wigner(int n, double w, EntryLaw law, WignerNormalization norm, std::uint64_t seed) {
  require_n(n);
  require_scale(w, "w");
  if (norm == WignerNormalization::RealSymmetricDoubledDiagonal) {
    if (is_complex(law)) throw InputError("real symmetric normalization needs a real entry law");
    return {real_wigner(n, w, law, seed), seed};
  }
  // Complex Gaussian entries coincide with the GUE construction.
  EntryLaw parts = is_complex(law) ? EntryLaw::RealGaussian : law;
  return {complex_wigner(n, w, parts, seed), seed};
}

HermitianSample sample_laguerre(int n, double a, std::uint64_t seed) {
  require_n(n);
  require_scale(a, "a");
  Engine eng(seed);
  EntrySampler draw(EntryLaw::RealGaussian, eng);
  Eigen::MatrixXcd A(n, n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) {
      double x = draw.real();
      double y = draw.real();
      A(j, k) = Complex(a * x, a * y);
    }
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  m.selfadjointView<Eigen::Lower>().rankUpdate(A, 1.0 / n);
  return {Eigen::MatrixXcd(m.selfadjointView<Eigen::Lower>()), seed};
}

HermitianSample sample_cov(int n, int m, std::span<const double> t_values, EntryLaw law, std::uint64_t seed) {
  require_n(n);
  if (m < 1) throw InputError("sample covariance needs m >= 1");
  if (static_cast<int>(t_values.size()) != m) throw InputError("t_values must have m entries");
  Eigen::VectorXd t(m);
  for (int l = 0; l < m; ++l) {
    if (!std::isfinite(t_values[l])) throw InputError("non-finite population value");
    t[l] = t_values[l];
  }
  Engine eng(seed);
  EntrySampler draw(law, eng);
  if (is_complex(law)) {
    Eigen::MatrixXcd A(n, m);
    for (int k = 0; k < m; ++k)
      for (int j = 0; j < n; ++j) A(j, k) = draw.complex();
    Eigen::MatrixXcd M = (A * t.asDiagonal()) * A.adjoint() / static_cast<double>(n);
    return {hermitian_part(M), seed};
  }
  Eigen::MatrixXd A(n, m);
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < n; ++j) A(j, k) = draw.real();
  Eigen::MatrixXd M = (A * t.asDiagonal()) * A.transpose() / static_cast<double>(n);
  return {hermitian_part(M), seed};
}

Eigen::MatrixXcd sample_haar_unitary(int n, std::uint64_t seed) {
  require_n(n);
  Engine eng(seed);
  EntrySampler draw(EntryLaw::ComplexGaussian, eng);
  Eigen::MatrixXcd g(n, n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) g(j, k) = draw.complex();
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  for (int j = 0; j < n; ++j) {
    Complex r = qr.matrixQR()(j, j);
    double mod = std::abs(r);
    q.col(j) *= mod > 0.0 ? r / mod : Complex(1.0);
  }
  return q;
}

std::vector<double> sample_cue_angles(int n, std::uint64_t seed) {
  Eigen::MatrixXcd u = sample_haar_unitary(n, seed);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(u, false);
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolver failed");
  std::vector<double> angles(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    double t = std::arg(solver.eigenvalues()[j]);
    if (t < 0.0) t += kTwoPi;
    if (t >= kTwoPi) t = 0.0;
    angles[j] = t;
  }
  std::sort(angles.begin(), angles.end());
  return angles;
}

HermitianSample sample_free_sum(std::span<const double> diag_a, std::span<const double> diag_b, std::uint64_t seed) {
  if (diag_a.empty()) throw InputError("free sum needs nonempty diagonals");
  if (diag_a.size() != diag_b.size()) throw InputError("length mismatch");
  const int n = static_cast<int>(diag_a.size());
  Eigen::Map<const Eigen::VectorXd> a(diag_a.data(), n), b(diag_b.data(), n);
  Eigen::MatrixXcd u = sample_haar_unitary(n, seed);
  Eigen::MatrixXcd h = u * b.cast<Complex>().asDiagonal() * u.adjoint();
  h.diagonal() += a.cast<Complex>();
  return {hermitian_part(h), seed};
}

HermitianSample sample_deformed(const HermitianSample& base, const EnsembleSpec& noise, std::uint64_t seed) {
  if (base.n() != noise.n) throw InputError("dimension mismatch");
  const bool wigner_like = noise.family == Family::GUE || noise.family == Family::GOE ||
                           noise.family == Family::WignerGeneral;
  if (wigner_like && noise.w == 0.0) return {base.matrix, seed};
  HermitianSample z = sample_matrix(noise, derive_seed(seed, 0, stream_tag("noise")));
  HermitianSample out{base.matrix, seed};
  if (out.is_real() && z.is_real()) {
    std::get<Eigen::MatrixXd>(out.matrix) += std::get<Eigen::MatrixXd>(z.matrix);
  } else {
    auto as_complex = [](const HermitianSample& s) -> Eigen::MatrixXcd {
      if (s.is_real()) return std::get<Eigen::MatrixXd>(s.matrix).cast<Complex>();
      return std::get<Eigen::MatrixXcd>(s.matrix);
    };
    out.matrix = Eigen::MatrixXcd(as_complex(out) + as_complex(z));
  }
  return out;
}

HermitianSample sample_deformed(const EnsembleSpec& spec, std::uint64_t seed) {
  if (spec.family != Family::Deformed) throw InputError("not a deformed spec");
  spec.validate();
  HermitianSample base;
  if (!spec.base_diagonal.empty()) {
    Eigen::Map<const Eigen::VectorXd> d(spec.base_diagonal.data(), spec.n);
    base = {Eigen::MatrixXd(d.asDiagonal()), seed};
  } else {
    base = sample_matrix(*spec.base, derive_seed(seed, 0, stream_tag("base")));
  }
  return sample_deformed(base, *spec.noise, seed);
}

// ---------------------------------------------------------------------------

LogGasRun run_log_gas(const PotentialPolynomial& V, int n, const McmcParams& mcmc, std::uint64_t seed) {
  require_n(n);
  mcmc.validate();
  if (!V.convex()) throw InputError("potential is not convex");
  Engine eng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit;

  // Start from the arcsine-spaced points on the leading-term support.
  std::vector<double> x(static_cast<std::size_t>(n));
  auto [lo, hi] = V.search_box();
  double center = 0.5 * (lo + hi), radius = V.leading_radius();
  for (int i = 0; i < n; ++i) x[i] = center + radius * std::cos(M_PI * (i + 0.5) / n);

  const double step = mcmc.step(n);
  const double dn = static_cast<double>(n);
  long accepted = 0, proposed = 0;
  LogGasRun run;
  run.samples.reserve(static_cast<std::size_t>(mcmc.sweeps / mcmc.thin));

  const long total = mcmc.burn_in + mcmc.sweeps;
  for (long sweep = 0; sweep < total; ++sweep) {
    for (int i = 0; i < n; ++i) {
      double old = x[i];
      double cand = old + step * normal(eng);
      // log of prod_j |cand - x_j| / |old - x_j|, multiplied in chunks to stay in range
      double log_ratio = 0.0, prod = 1.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        prod *= (cand - x[j]) / (old - x[j]);
        if ((j & 15) == 15) {
          log_ratio += std::log(std::abs(prod));
          prod = 1.0;
        }
      }
      log_ratio += std::log(std::abs(prod));
      double delta = 2.0 * log_ratio - dn * log_gas_potential_step(V, old, cand);
      ++proposed;
      if (delta >= 0.0 || unit(eng) < std::exp(delta)) {
        x[i] = cand;
        ++accepted;
      }
    }
    if (sweep >= mcmc.burn_in && (sweep - mcmc.burn_in) % mcmc.thin == 0) {
      std::vector<double> s = x;
      std::sort(s.begin(), s.end());
      run.samples.push_back(std::move(s));
    }
  }
  run.acceptance_rate = proposed > 0 ? static_cast<double>(accepted) / static_cast<double>(proposed) : 0.0;
  return run;
}

std::vector<double> sample_invariant(const PotentialPolynomial& V, int n, const McmcParams& mcmc, std::uint64_t seed) {
  McmcParams last = mcmc;
  last.thin = 1;
  LogGasRun run = run_log_gas(V, n, last, seed);
  return run.samples.back();
}

// ---------------------------------------------------------------------------

HermitianSample sample_matrix(const EnsembleSpec& spec, std::uint64_t seed) {
  spec.validate();
  switch (spec.family) {
    case Family::GUE: return sample_gue(spec.n, spec.w, seed);
    case Family::GOE: return sample_goe(spec.n, spec.w, seed);
    case Family::WignerGeneral: return sample_wigner(spec.n, spec.w, spec.law, spec.normalization, seed);
    case Family::Laguerre: return sample_laguerre(spec.n, spec.a, seed);
    case Family::SampleCovariance: return sample_cov(spec.n, spec.m, spec.t_values, spec.law, seed);
    case Family::FreeSum: return sample_free_sum(spec.diag_a, spec.diag_b, seed);
    case Family::Deformed: return sample_deformed(spec, seed);
    case Family::HaarUnitary:
    case Family::InvariantLogGas:
      break;
  }
  throw InputError("family '" + std::string(to_string(spec.family)) + "' has no Hermitian matrix");
}

std::vector<double> sample_spectrum(const EnsembleSpec& spec, std::uint64_t seed) {
  spec.validate();
  if (spec.family == Family::HaarUnitary) return sample_cue_angles(spec.n, seed);
  if (spec.family == Family::InvariantLogGas) return sample_invariant(*spec.potential, spec.n, spec.mcmc, seed);
  return eigenvalues(sample_matrix(spec, seed));
}

std::vector<double> eigenvalues(const HermitianSample& h) {
  return std::visit([](const auto& m) { return to_vector(eigenvalues(m)); }, h.matrix);
}

Complex spectrum_stieltjes(std::span<const double> eigenvalues, Complex z) {
  if (eigenvalues.empty()) throw InputError("empty spectrum");
  Complex sum = 0.0;
  for (double l : eigenvalues) sum += 1.0 / (l - z);
  return sum / static_cast<double>(eigenvalues.size());
}

namespace {

template <typename Matrix>
std::vector<Complex> tridiagonal_traces(const Matrix& m, std::span<const Complex> zs) {
  Eigen::Tridiagonalization<Matrix> tri(m);
  const Eigen::VectorXd d = tri.diagonal().real();
  const Eigen::VectorXd e = tri.subDiagonal().real();
  const Eigen::Index n = d.size();
  std::vector<Complex> out;
  out.reserve(zs.size());
  for (Complex z : zs) {
    if (z.imag() == 0.0) throw InputError("real spectral parameter");
    // r_k = p_k / p_{k-1} for p_k = det(T_k - z); Tr (T - z)^{-1} = -sum r_k' / r_k.
    Complex r = d[0] - z, dr = -1.0;
    Complex sum = dr / r;
    for (Eigen::Index k = 1; k < n; ++k) {
      double b2 = e[k - 1] * e[k - 1];
      Complex rn = (d[k] - z) - b2 / r;
      dr = -1.0 + b2 * dr / (r * r);
      r = rn;
      sum += dr / r;
    }
    out.push_back(-sum / static_cast<double>(n));
  }
  return out;
}

}  // namespace

std::vector<Complex> resolvent_traces(const HermitianSample& h, std::span<const Complex> z) {
  return std::visit(
      [&](const auto& m) {
        if (!m.allFinite()) throw InputError("non-finite matrix entries");
        return tridiagonal_traces(m, z);
      },
      h.matrix);
}

Complex spectrum_herglotz(std::span<const double> angles, Complex z) {
  if (angles.empty()) throw InputError("empty spectrum");
  Complex sum = 0.0;
  for (double t : angles) {
    Complex e = std::polar(1.0, t);
    sum += (e + z) / (e - z);
  }
  return sum / static_cast<double>(angles.size());
}

Complex unitary_herglotz(const Eigen::MatrixXcd& u, Complex z) {
  if (std::abs(std::abs(z) - 1.0) <= 1e-12) throw InputError("on unit circle");
  const auto n = u.rows();
  Eigen::MatrixXcd shifted = u;
  shifted.diagonal().array() -= z;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(shifted);
  Complex trace = lu.inverse().trace();
  return 1.0 + 2.0 * z * trace / static_cast<double>(n);
}

}  // namespace rmt
