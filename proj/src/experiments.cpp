#include "rmt/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <sstream>

#include "rmt/config_io.hpp"
#include "rmt/limit_laws.hpp"
#include "rmt/measures.hpp"
#include "rmt/parallel.hpp"

namespace rmt {

namespace {

using nlohmann::json;

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

double t_quantile_975(int dof) {
  static const double table[] = {
      12.706204736432095, 4.302652729696142, 3.182446305284263, 2.7764451051977987, 2.570581835636314,
      2.4469118511449692, 2.3646242515927844, 2.306004135204166, 2.2621571628540993, 2.2281388519649385,
      2.200985160082949, 2.1788128296634177, 2.1603686564610127, 2.1447866879169273, 2.131449545559323,
      2.1199052992210112, 2.1098155778331806, 2.10092204024096, 2.093024054408263, 2.0859634472658364,
      2.079613844727662, 2.0738730679040147, 2.0686576104190406, 2.0638985616280205, 2.059538552753294,
      2.055529438642871, 2.0518305164802833, 2.048407141795244, 2.045229642132703, 2.0422724563012373};
  if (dof < 1) return INFINITY;
  if (dof <= 30) return table[dof - 1];
  const double z = 1.959963984540054, z3 = z * z * z, z5 = z3 * z * z, z7 = z5 * z * z;
  const double v = dof;
  return z + (z3 + z) / (4 * v) + (5 * z5 + 16 * z3 + 3 * z) / (96 * v * v) +
         (3 * z7 + 19 * z5 + 17 * z3 - 15 * z) / (384 * v * v * v);
}

template <typename T>
std::vector<T> run_trials(int trials, unsigned threads, const std::function<T(std::size_t)>& one) {
  std::vector<T> out(static_cast<std::size_t>(trials));
  parallel_for(out.size(), threads, [&](std::size_t t) { out[t] = one(t); });
  return out;
}

std::uint64_t stream_seed(std::uint64_t seed, const std::string& id, int n) {
  return derive_seed(seed, static_cast<std::uint64_t>(n), stream_tag(id));
}

void require_safe_z(Complex z, double w) {
  if (z.imag() < 5.0 * w * (1.0 - 1e-12)) throw InputError("Im z must be at least 5w");
}

std::optional<Complex> limit_target(const EnsembleSpec& spec, Complex z) {
  switch (spec.family) {
    case Family::GUE:
      return semicircle_stieltjes(z, spec.w, 2);
    case Family::GOE:
      return semicircle_stieltjes(z, spec.w, 1);
    case Family::WignerGeneral:
      if (!has_finite_variance(spec.law)) return std::nullopt;
      return spec.normalization == WignerNormalization::Hermitian ? semicircle_stieltjes(z, spec.w, 2)
                                                                  : semicircle_stieltjes(z, spec.w, 1);
    case Family::Laguerre:
      return laguerre_stieltjes(z, spec.a, 2);
    case Family::HaarUnitary:
      return circular_limit_herglotz(z);
    default:
      return std::nullopt;
  }
}

// |mean - target| should not grow with n beyond two combined standard errors.
void add_bias_check(ExperimentReport& rep) {
  double worst = 0.0;
  bool any = false;
  for (std::size_t k = 1; k < rep.per_n.size(); ++k) {
    const auto& a = rep.per_n[k - 1];
    const auto& b = rep.per_n[k];
    if (!a.target || !b.target) continue;
    any = true;
    double grow = std::abs(b.mean - *b.target) - std::abs(a.mean - *a.target) - 2.0 * (a.stderr_mean + b.stderr_mean);
    worst = std::max(worst, grow);
  }
  if (any) rep.add_check("bias_nonincreasing", worst, -INFINITY, 0.0);
}

json n_list_json(std::span<const int> n_list) { return json(std::vector<int>(n_list.begin(), n_list.end())); }

}  // namespace

bool ExperimentReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

void ExperimentReport::add_check(std::string name, double value, double lo, double hi) {
  checks.push_back({std::move(name), value, lo, hi, value >= lo && value <= hi});
}

PerNStats summarize(int n, std::span<const Complex> values) {
  PerNStats s;
  s.n = n;
  s.trials = static_cast<int>(values.size());
  if (values.empty()) return s;
  Complex sum = 0.0;
  for (Complex v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() >= 2) {
    double ss = 0.0;
    for (Complex v : values) ss += std::norm(v - s.mean);
    s.variance = ss / static_cast<double>(values.size() - 1);
    s.stderr_mean = std::sqrt(s.variance / static_cast<double>(values.size()));
    s.stderr_variance = s.variance * std::sqrt(2.0 / static_cast<double>(values.size() - 1));
  }
  return s;
}

SlopeFit fit_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 3) throw InputError("slope fit needs at least three points");
  const double k = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw InputError("slope fit needs distinct x values");
  SlopeFit f;
  f.points = static_cast<int>(x.size());
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double r = y[i] - f.intercept - f.slope * x[i];
    rss += r * r;
  }
  int dof = f.points - 2;
  f.half_width = t_quantile_975(dof) * std::sqrt(rss / dof / sxx);
  return f;
}

double sample_skewness(std::span<const double> x) {
  const double k = static_cast<double>(x.size());
  double m = 0.0;
  for (double v : x) m += v;
  m /= k;
  double m2 = 0.0, m3 = 0.0;
  for (double v : x) {
    double d = v - m;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= k;
  m3 /= k;
  return m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
}

double sample_excess_kurtosis(std::span<const double> x) {
  const double k = static_cast<double>(x.size());
  double m = 0.0;
  for (double v : x) m += v;
  m /= k;
  double m2 = 0.0, m4 = 0.0;
  for (double v : x) {
    double d = v - m;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  m2 /= k;
  m4 /= k;
  return m2 > 0.0 ? m4 / (m2 * m2) - 3.0 : 0.0;
}

Complex expansion_coefficient(Complex z, double w, double sigma) {
  Complex f = semicircle_stieltjes(z, w, 1);
  Complex q = 1.0 - w * w * f * f;
  return f * (w * w * f * f / (q * q) + sigma * std::pow(f, 4) / q);
}

Complex clt_covariance(Complex z1, Complex z2, double w, double sigma) {
  Complex f1 = semicircle_stieltjes(z1, w, 1);
  Complex f2 = semicircle_stieltjes(z2, w, 1);
  Complex quotient = std::abs(z1 - z2) < 1e-12 ? semicircle_stieltjes_derivative(z1, w, 1) : (f1 - f2) / (z1 - z2);
  Complex pre = 2.0 / ((1.0 - w * w * f1 * f1) * (1.0 - w * w * f2 * f2));
  return pre * (w * w * quotient * quotient + sigma * std::pow(f1, 3) * std::pow(f2, 3));
}

// ---------------------------------------------------------------------------

ExperimentReport run_variance_sweep(const EnsembleSpec& spec, std::span<const int> n_list, int trials, Complex z,
                                    const RunOptions& opt) {
  if (n_list.size() < 3) throw InputError("variance sweep needs at least three n values");
  if (trials < 2) throw InputError("variance sweep needs at least two trials");
  const bool circular = spec.family == Family::HaarUnitary;
  if (circular) {
    if (std::abs(z) > 0.25) throw InputError("circular sweep needs |z| <= 1/4");
  } else if (spec.family == Family::GUE || spec.family == Family::GOE || spec.family == Family::WignerGeneral) {
    require_safe_z(z, spec.w);
  } else if (z.imag() == 0.0) {
    throw InputError("real spectral parameter");
  }

  ExperimentReport rep;
  rep.id = "variance";
  rep.config = {{"spec", to_json(spec)}, {"n_list", n_list_json(n_list)}, {"trials", trials},
                {"z", complex_json(z)},   {"seed", opt.seed}};
  std::vector<double> lx, ly;
  for (int n : n_list) {
    EnsembleSpec s = spec;
    s.n = n;
    s.validate();
    std::uint64_t base = stream_seed(opt.seed, rep.id, n);
    std::vector<Complex> g = run_trials<Complex>(trials, opt.threads, [&](std::size_t t) {
      std::uint64_t seed = derive_seed(base, t);
      if (circular) return unitary_herglotz(sample_haar_unitary(n, seed), z);
      if (s.family != Family::InvariantLogGas)
        return resolvent_traces(sample_matrix(s, seed), std::span<const Complex>(&z, 1))[0];
      std::vector<double> eig = sample_spectrum(s, seed);
      return spectrum_stieltjes(eig, z);
    });
    PerNStats st = summarize(n, g);
    st.target = limit_target(s, z);
    rep.per_n.push_back(st);
    if (!(st.variance > 0.0)) throw NumericalError("zero sample variance; cannot fit a slope");
    lx.push_back(std::log(static_cast<double>(n)));
    ly.push_back(std::log(st.variance));
  }
  rep.slope = fit_slope(lx, ly);
  rep.add_check("slope", rep.slope->slope, -2.4, -1.6);
  add_bias_check(rep);
  return rep;
}

ExperimentReport run_expansion_check(EntryLaw law, double w, std::span<const int> n_list, int trials, Complex z,
                                     const RunOptions& opt) {
  if (!has_finite_variance(law)) throw InputError("cauchy entries have no expansion");
  if (is_complex(law)) throw InputError("expansion check needs a real entry law");
  if (n_list.empty()) throw InputError("expansion check needs at least one n");
  if (trials < 2) throw InputError("expansion check needs at least two trials");
  if (!(w > 0.0)) throw InputError("w must be positive");
  require_safe_z(z, w);

  ExperimentReport rep;
  rep.id = "expansion";
  const double sigma = excess(law) * std::pow(w, 4);
  rep.config = {{"law", std::string(to_string(law))}, {"w", w},   {"n_list", n_list_json(n_list)},
                {"trials", trials},                   {"z", complex_json(z)}, {"seed", opt.seed}};
  const Complex f = semicircle_stieltjes(z, w, 1);
  const Complex predicted = expansion_coefficient(z, w, sigma);
  json rows = json::array();
  double last_rel = INFINITY;
  for (int n : n_list) {
    std::uint64_t base = stream_seed(opt.seed, rep.id + std::string(to_string(law)), n);
    std::vector<Complex> g = run_trials<Complex>(trials, opt.threads, [&](std::size_t t) {
      HermitianSample h = sample_wigner(n, w, law, WignerNormalization::RealSymmetricDoubledDiagonal, derive_seed(base, t));
      return resolvent_traces(h, std::span<const Complex>(&z, 1))[0];
    });
    PerNStats st = summarize(n, g);
    st.target = f;
    rep.per_n.push_back(st);
    Complex scaled = static_cast<double>(n) * (st.mean - f);
    double scaled_se = n * st.stderr_mean;
    last_rel = std::abs(scaled - predicted) / std::abs(predicted);
    rows.push_back({{"n", n},
                    {"scaled", complex_json(scaled)},
                    {"scaled_stderr", scaled_se},
                    {"relative_error", last_rel}});
  }
  // Rescaling z by w must reproduce the coefficient up to the factor 1/w.
  Complex unit = expansion_coefficient(z / w, 1.0, excess(law));
  double collapse = std::abs(predicted - unit / w);
  rep.values = {{"excess", sigma}, {"f", complex_json(f)}, {"predicted", complex_json(predicted)},
                {"per_n", rows},   {"scale_collapse", collapse}};
  rep.add_check("relative_error", last_rel, 0.0, 0.2);
  rep.add_check("scale_collapse", collapse, 0.0, 1e-12);
  return rep;
}

ExperimentReport run_clt_check(double w, int n, int trials, Complex z1, Complex z2, const RunOptions& opt,
                               EntryLaw law) {
  if (trials < 100) throw InputError("CLT check needs at least 100 trials");
  if (!has_finite_variance(law) || is_complex(law)) throw InputError("CLT check needs a real law with finite moments");
  if (!(w > 0.0)) throw InputError("w must be positive");
  require_safe_z(Complex(z1.real(), std::abs(z1.imag())), w);
  require_safe_z(Complex(z2.real(), std::abs(z2.imag())), w);

  ExperimentReport rep;
  rep.id = "clt";
  rep.config = {{"w", w},           {"n", n},  {"trials", trials}, {"z1", complex_json(z1)},
                {"z2", complex_json(z2)}, {"seed", opt.seed}, {"law", std::string(to_string(law))}};
  std::uint64_t base = stream_seed(opt.seed, rep.id, n);
  auto pairs = run_trials<std::array<Complex, 2>>(trials, opt.threads, [&](std::size_t t) {
    HermitianSample h = sample_wigner(n, w, law, WignerNormalization::RealSymmetricDoubledDiagonal, derive_seed(base, t));
    const Complex zs[2] = {z1, z2};
    std::vector<Complex> g = resolvent_traces(h, zs);
    return std::array<Complex, 2>{g[0], g[1]};
  });
  std::vector<Complex> a(pairs.size()), b(pairs.size());
  for (std::size_t t = 0; t < pairs.size(); ++t) {
    a[t] = pairs[t][0];
    b[t] = pairs[t][1];
  }
  PerNStats sa = summarize(n, a), sb = summarize(n, b);
  rep.per_n = {sa};
  const double dn = n, T = trials;

  std::vector<double> re(a.size()), im(a.size());
  Complex herm = 0.0, bil = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) {
    Complex ga = dn * (a[t] - sa.mean), gb = dn * (b[t] - sb.mean);
    herm += ga * std::conj(gb);
    bil += ga * gb;
    re[t] = ga.real();
    im[t] = ga.imag();
  }
  herm /= T - 1.0;
  bil /= T - 1.0;
  double bil_im_sq = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) {
    Complex prod = dn * (a[t] - sa.mean) * dn * (b[t] - sb.mean);
    bil_im_sq += std::pow(prod.imag() - bil.imag(), 2);
  }
  double bil_im_se = std::sqrt(bil_im_sq / (T - 1.0) / T);

  const double sigma = excess(law) * std::pow(w, 4);
  Complex c_herm = clt_covariance(z1, std::conj(z2), w, sigma);
  Complex c_bil = clt_covariance(z1, z2, w, sigma);
  double rel = std::abs(herm - c_herm) / std::abs(c_herm);
  double skew_re = sample_skewness(re), skew_im = sample_skewness(im);
  double kurt_re = sample_excess_kurtosis(re), kurt_im = sample_excess_kurtosis(im);
  double skew_band = 3.0 * std::sqrt(6.0 / T), kurt_band = 3.0 * std::sqrt(24.0 / T);

  rep.values = {{"covariance", complex_json(herm)},         {"predicted", complex_json(c_herm)},
                {"bilinear", complex_json(bil)},            {"predicted_bilinear", complex_json(c_bil)},
                {"bilinear_imag_stderr", bil_im_se},        {"relative_error", rel},
                {"skewness_re", skew_re},                   {"skewness_im", skew_im},
                {"excess_kurtosis_re", kurt_re},            {"excess_kurtosis_im", kurt_im},
                {"skewness_band", skew_band},               {"kurtosis_band", kurt_band}};
  rep.add_check("covariance_relative_error", rel, 0.0, 0.25);
  rep.add_check("skewness_re", skew_re, -skew_band, skew_band);
  rep.add_check("skewness_im", skew_im, -skew_band, skew_band);
  rep.add_check("excess_kurtosis_re", kurt_re, -kurt_band, kurt_band);
  rep.add_check("excess_kurtosis_im", kurt_im, -kurt_band, kurt_band);
  if (std::abs(z2 - std::conj(z1)) < 1e-12 * std::max(1.0, std::abs(z1)))
    rep.add_check("bilinear_imag_in_stderr", std::abs(bil.imag()), 0.0, 3.0 * bil_im_se);
  return rep;
}

ExperimentReport run_lindeberg_demo(std::span<const EntryLaw> laws, int n, int trials, const RunOptions& opt,
                                    double w) {
  if (n < 256) throw InputError("Lindeberg demo needs n >= 256");
  if (trials < 1) throw InputError("need at least one trial");
  if (laws.empty()) throw InputError("need at least one entry law");
  ExperimentReport rep;
  rep.id = "lindeberg";
  json names = json::array();
  for (EntryLaw l : laws) names.push_back(std::string(to_string(l)));
  rep.config = {{"laws", names}, {"n", n}, {"trials", trials}, {"w", w}, {"seed", opt.seed}};
  const SpectralMeasure sc = SpectralMeasure::semicircle(w, 2);
  for (EntryLaw law : laws) {
    std::string name(to_string(law));
    std::uint64_t base = stream_seed(opt.seed, rep.id + name, n);
    std::vector<double> ks = run_trials<double>(trials, opt.threads, [&](std::size_t t) {
      HermitianSample h = sample_wigner(n, w, law, WignerNormalization::Hermitian, derive_seed(base, t));
      return ks_distance(empirical_measure(eigenvalues(h)), sc).value;
    });
    double mean = 0.0;
    for (double v : ks) mean += v;
    mean /= static_cast<double>(ks.size());
    const bool expect_pass = has_finite_variance(law);
    rep.values[name] = {{"mean_ks", mean}, {"ks", ks}, {"expected", expect_pass ? "semicircle" : "no semicircle"}};
    if (expect_pass)
      rep.add_check("ks_" + name, mean, 0.0, 0.05);
    else
      rep.add_check("ks_" + name, mean, 0.1, 1.0);
  }
  return rep;
}

ExperimentReport run_mv_check(const PotentialPolynomial& V, int n, const McmcParams& mcmc, const RunOptions& opt) {
  if (!V.convex()) throw InputError("potential is not convex");
  ExperimentReport rep;
  rep.id = "mv";
  rep.config = {{"potential", V.coeffs()},
                {"n", n},
                {"mcmc",
                 {{"sweeps", mcmc.sweeps},
                  {"burn_in", mcmc.burn_in},
                  {"proposal_scale", mcmc.step(n)},
                  {"thin", mcmc.thin}}},
                {"seed", opt.seed}};
  LogGasRun run = run_log_gas(V, n, mcmc, derive_seed(opt.seed, 0, stream_tag("mv")));
  if (run.acceptance_rate < 0.1 || run.acceptance_rate > 0.9) {
    std::ostringstream os;
    os << "MCMC acceptance rate " << run.acceptance_rate << " outside [0.1, 0.9]";
    rep.warnings.push_back(os.str());
  }
  std::vector<double> obs(run.samples.size());
  std::vector<double> pooled;
  pooled.reserve(run.samples.size() * static_cast<std::size_t>(n));
  for (std::size_t s = 0; s < run.samples.size(); ++s) {
    double acc = 0.0;
    for (double l : run.samples[s]) acc += l * V.derivative(l);
    obs[s] = acc / n;
    pooled.insert(pooled.end(), run.samples[s].begin(), run.samples[s].end());
  }
  double mean = 0.0;
  for (double v : obs) mean += v;
  mean /= static_cast<double>(obs.size());
  // Batch means for the autocorrelated chain.
  const std::size_t batches = std::min<std::size_t>(20, obs.size());
  std::vector<double> bm(batches, 0.0);
  std::size_t per = obs.size() / batches;
  for (std::size_t b = 0; b < batches; ++b) {
    for (std::size_t i = 0; i < per; ++i) bm[b] += obs[b * per + i];
    bm[b] /= static_cast<double>(per);
  }
  double bvar = 0.0;
  for (double v : bm) bvar += (v - mean) * (v - mean);
  double se = batches > 1 ? std::sqrt(bvar / (batches - 1.0) / batches) : INFINITY;

  double ks = INFINITY;
  try {
    SupportInterval sup = solve_support(V);
    ks = ks_distance(empirical_measure(pooled), equilibrium_measure(V, sup)).value;
  } catch (const NumericalError& e) {
    rep.warnings.push_back(std::string("equilibrium measure unavailable: ") + e.what());
  }
  rep.values = {{"mv_mean", mean},
                {"mv_stderr", se},
                {"acceptance_rate", run.acceptance_rate},
                {"samples", run.samples.size()},
                {"ks_to_equilibrium", ks}};
  rep.add_check("mv_relative_error", std::abs(mean - 1.0), 0.0, 0.05);
  rep.add_check("ks_to_equilibrium", ks, 0.0, 0.1);
  return rep;
}

}  // namespace rmt
