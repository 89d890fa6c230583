#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "rmt/ensembles.hpp"

namespace rmt {

struct PerNStats {
  int n = 0;
  int trials = 0;
  Complex mean;
  double variance = 0.0;        // unbiased estimate of E|g - E g|^2
  double stderr_mean = 0.0;     // sqrt(variance / trials)
  double stderr_variance = 0.0; // variance * sqrt(2 / (trials - 1))
  std::optional<Complex> target;  // limiting value when known
};

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double half_width = 0.0;  // 95% t-interval
  int points = 0;
};

struct Check {
  std::string name;
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool pass = false;
};

struct ExperimentReport {
  std::string id;
  nlohmann::json config;              // echo of every input, including the seed
  std::vector<PerNStats> per_n;
  std::optional<SlopeFit> slope;
  nlohmann::json values = nlohmann::json::object();
  std::vector<Check> checks;
  std::vector<std::string> warnings;

  bool pass() const;
  void add_check(std::string name, double value, double lo, double hi);
};

struct RunOptions {
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// Mean and unbiased complex variance of trial values, reduced in index order.
PerNStats summarize(int n, std::span<const Complex> values);

/// Least squares fit of y on x with a 95% t half-width; needs three points.
SlopeFit fit_slope(std::span<const double> x, std::span<const double> y);

double sample_skewness(std::span<const double> x);
double sample_excess_kurtosis(std::span<const double> x);

/// First-order coefficient lim n (E g_n - f) for the real symmetric ensemble
/// with off-diagonal variance w^2, diagonal variance 2 w^2 and fourth cumulant sigma.
Complex expansion_coefficient(Complex z, double w, double sigma);

/// Limiting covariance of n (g_n - E g_n) at (z1, z2) for the same ensemble.
Complex clt_covariance(Complex z1, Complex z2, double w, double sigma);

/// Var g_n(z) (or Var h_n(z) for HaarUnitary) across n, with a log-log slope fit.
ExperimentReport run_variance_sweep(const EnsembleSpec& spec, std::span<const int> n_list, int trials, Complex z,
                                    const RunOptions& opt);

/// n (mean g_n - f) for the real symmetric doubled-diagonal Wigner ensemble.
ExperimentReport run_expansion_check(EntryLaw law, double w, std::span<const int> n_list, int trials, Complex z,
                                     const RunOptions& opt);

/// Covariance and normality of n (g_n - mean) at z1, z2.
ExperimentReport run_clt_check(double w, int n, int trials, Complex z1, Complex z2, const RunOptions& opt,
                               EntryLaw law = EntryLaw::RealGaussian);

/// Mean KS distance of Hermitian Wigner spectra to the semicircle, per law.
ExperimentReport run_lindeberg_demo(std::span<const EntryLaw> laws, int n, int trials, const RunOptions& opt,
                                    double w = 1.0);

/// Log-gas estimate of E (1/n) sum lambda V'(lambda), and KS of the pooled
/// chain to the equilibrium measure.
ExperimentReport run_mv_check(const PotentialPolynomial& V, int n, const McmcParams& mcmc, const RunOptions& opt);

}  // namespace rmt
