#include "rmt/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "rmt/config_io.hpp"
#include "rmt/error.hpp"
#include "rmt/experiments.hpp"
#include "rmt/free_conv.hpp"
#include "rmt/limit_laws.hpp"
#include "rmt/parallel.hpp"

namespace rmt::cli {

namespace fs = std::filesystem;

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw InputError("bad grid '" + text + "' (expected lo:hi:step)");
    }
  }
  if (parts.size() != 3) throw InputError("bad grid '" + text + "' (expected lo:hi:step)");
  if (!(parts[2] > 0.0) || !(parts[1] > parts[0])) throw InputError("bad grid '" + text + "': need lo < hi, step > 0");
  return uniform_grid(parts[0], parts[1], parts[2]);
}

Complex parse_complex(const std::string& raw) {
  std::string s;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  auto bad = [&]() -> InputError { return InputError("bad complex number '" + raw + "'"); };
  auto number = [&](const std::string& t) {
    try {
      std::size_t used = 0;
      double v = std::stod(t, &used);
      if (used != t.size()) throw bad();
      return v;
    } catch (const std::logic_error&) {
      throw bad();
    }
  };
  if (s.empty()) throw bad();
  if (s.back() != 'i') return {number(s), 0.0};
  s.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;)
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  std::string re = split == std::string::npos ? "" : s.substr(0, split);
  std::string im = split == std::string::npos ? s : s.substr(split);
  double y = im.empty() || im == "+" ? 1.0 : im == "-" ? -1.0 : number(im);
  return {re.empty() ? 0.0 : number(re), y};
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::logic_error&) {
      throw InputError("bad integer list '" + text + "'");
    }
  }
  if (out.empty()) throw InputError("empty integer list");
  return out;
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

/// Sibling path: "out/x.json" + "_hist.csv" -> "out/x_hist.csv".
fs::path sibling(const fs::path& out, const std::string& suffix) {
  fs::path p = out;
  p.replace_extension();
  return fs::path(p.string() + suffix);
}

struct Globals {
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string solver;
  std::string out;
};

struct LawOptions {
  std::string law = "semicircle";
  double w = 1.0;
  double a = std::sqrt(0.5);
  int beta = 2;
  double c = 1.0;
  std::string sigma;
  std::string base;
  std::string measure;
  std::string grid;
  double eps = 0.0;
};

void add_law_options(CLI::App* cmd, LawOptions& o) {
  cmd->add_option("--law", o.law, "semicircle, laguerre, mp, deformed-semicircle, deformed-laguerre, measure")
      ->capture_default_str();
  cmd->add_option("--w", o.w, "semicircle scale")->capture_default_str();
  cmd->add_option("--a", o.a, "laguerre scale")->capture_default_str();
  cmd->add_option("--beta", o.beta, "symmetry class 1, 2 or 4")->capture_default_str();
  cmd->add_option("--c", o.c, "dimension ratio m/n")->capture_default_str();
  cmd->add_option("--sigma", o.sigma, "population measure JSON (mp)");
  cmd->add_option("--base", o.base, "unperturbed measure JSON (deformed laws, optional for mp)");
  cmd->add_option("--measure", o.measure, "measure JSON (law=measure)");
  cmd->add_option("--grid", o.grid, "lo:hi:step");
  cmd->add_option("--eps", o.eps, "inversion height (default from solver config)");
}

Json law_json(const LawOptions& o) {
  Json j = {{"law", o.law}};
  if (o.law == "semicircle") j.update({{"w", o.w}, {"beta", o.beta}});
  if (o.law == "laguerre") j.update({{"a", o.a}, {"beta", o.beta}});
  if (o.law == "mp") {
    j["c"] = o.c;
    if (!o.sigma.empty()) j["sigma"] = to_json(load_measure(o.sigma));
  }
  if (o.law == "deformed-semicircle") j["w"] = o.w;
  if (o.law == "deformed-laguerre") j["a"] = o.a;
  if (!o.base.empty()) j["base"] = to_json(load_measure(o.base));
  if (o.law == "measure") j["measure"] = to_json(load_measure(o.measure));
  if (!o.grid.empty()) j["grid"] = o.grid;
  if (o.eps > 0.0) j["eps"] = o.eps;
  return j;
}

struct Tabulated {
  std::vector<double> grid;
  std::vector<double> values;
  double max_residual = 0.0;
  bool inverted = false;
  bool negative_warning = false;
  double epsilon = 0.0;
};

/// Density of the requested law on the grid: closed form where available,
/// otherwise inversion of the solver's transform at height eps.
Tabulated tabulate_law(const LawOptions& o, std::span<const double> grid, const SolverConfig& cfg) {
  Tabulated t;
  t.grid.assign(grid.begin(), grid.end());
  if (o.law == "semicircle" || o.law == "laguerre" || o.law == "measure") {
    std::optional<SpectralMeasure> m;
    if (o.law == "measure") {
      m = load_measure(o.measure);
      if (m->as_atoms()) throw InputError("atomic measure has no density");
    }
    for (double x : grid) {
      double v = o.law == "semicircle" ? semicircle_density(x, o.w, o.beta)
                 : o.law == "laguerre" ? laguerre_density(x, o.a, o.beta)
                                       : density_at(*m, x);
      t.values.push_back(v);
    }
    return t;
  }
  double eps = o.eps > 0.0 ? o.eps : cfg.epsilon_inversion;
  std::optional<ComplexEvaluator> f0;
  if (!o.base.empty()) f0 = stieltjes_evaluator(load_measure(o.base));
  std::function<FixedPointResult(Complex)> solve;
  if (o.law == "mp") {
    if (o.sigma.empty()) throw InputError("--sigma is required for law mp");
    auto sigma = std::make_shared<SpectralMeasure>(load_measure(o.sigma));
    ComplexEvaluator base = f0 ? *f0 : point_mass_transform();
    solve = [=](Complex z) { return solve_mp(z, o.c, *sigma, base, cfg); };
  } else if (o.law == "deformed-semicircle" || o.law == "deformed-laguerre") {
    if (!f0) throw InputError("--base is required for law " + o.law);
    ComplexEvaluator base = *f0;
    if (o.law == "deformed-semicircle")
      solve = [=](Complex z) { return solve_deformed_semicircle(z, o.w, base, cfg); };
    else
      solve = [=](Complex z) { return solve_deformed_laguerre(z, o.a, base, cfg); };
  } else {
    throw InputError("unknown law '" + o.law + "'");
  }
  double worst = 0.0;
  ComplexEvaluator f([&](Complex z) {
    FixedPointResult r = solve(z);
    worst = std::max(worst, r.residual);
    return r.f;
  });
  Inversion inv = invert_stieltjes(f, grid, eps);
  t.values = inv.raw;
  t.max_residual = worst;
  t.inverted = true;
  t.negative_warning = inv.negative_warning;
  t.epsilon = eps;
  return t;
}

/// Reference measure for compare.
SpectralMeasure reference_measure(const LawOptions& o, const SolverConfig& cfg) {
  if (o.law == "semicircle") return SpectralMeasure::semicircle(o.w, o.beta);
  if (o.law == "laguerre") return SpectralMeasure::laguerre(o.a, o.beta);
  if (o.law == "uniform_circle") return SpectralMeasure::uniform_circle();
  if (o.law == "measure") return load_measure(o.measure);
  if (o.grid.empty()) throw InputError("--grid is required for law " + o.law);
  std::vector<double> grid = parse_grid(o.grid);
  Tabulated t = tabulate_law(o, grid, cfg);
  double mass = trapezoid_mass(GridDensity{t.grid, t.values, Domain::Real});
  if (!(mass > 0.0)) throw NumericalError("reference density has no mass on the grid");
  for (double& v : t.values) v /= mass;
  return SpectralMeasure::density(t.grid, t.values);
}

std::vector<std::vector<double>> columns_to_rows(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<std::vector<double>> rows;
  rows.reserve(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) rows.push_back({x[k], y[k]});
  return rows;
}

std::vector<std::vector<double>> samples_of(const EnsembleSpec& spec, int trials, const Globals& g) {
  std::vector<std::vector<double>> out(static_cast<std::size_t>(trials));
  parallel_for(out.size(), g.threads, [&](std::size_t t) {
    out[t] = sample_spectrum(spec, derive_seed(g.seed, t, stream_tag("sample")));
  });
  return out;
}

EnsembleSpec spec_with_n(const std::string& path, int n) {
  if (path.empty()) throw InputError("--spec is required");
  EnsembleSpec spec = load_spec(path);
  if (n > 0) spec.n = n;
  if (spec.n <= 0) throw InputError("field 'n': missing (set it in the ensemble JSON or pass --n)");
  spec.validate();
  return spec;
}

struct Outcome {
  std::string summary;
  Json config;
  std::vector<std::string> outputs;
};

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Limiting spectral laws of random matrices: solvers, samplers and Monte Carlo checks", "rmt"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);

  Globals g;
  app.add_option("--seed", g.seed, "base seed")->capture_default_str();
  app.add_option("--threads", g.threads, "trial-level worker threads (0 = all cores)")->capture_default_str();
  app.add_option("--solver", g.solver, "solver config JSON");
  app.add_option("--out", g.out, "output path")->required();

  LawOptions density_o;
  auto* density = app.add_subcommand("density", "Tabulate a limiting density on a grid (CSV lambda,rho)");
  add_law_options(density, density_o);

  std::string spec_path;
  int n_override = 0;
  int trials = 1;
  auto* sample = app.add_subcommand("sample", "Sample spectra into <out>/trial_XXXX.csv");
  sample->add_option("--spec", spec_path, "ensemble spec JSON")->required();
  sample->add_option("--n", n_override, "matrix size (overrides n in the ensemble JSON)");
  sample->add_option("--trials", trials, "number of samples")->capture_default_str();

  LawOptions compare_o;
  std::string compare_source;
  int bins = 0;
  auto* compare = app.add_subcommand("compare", "KS distance of sampled (or given) spectra to a reference law");
  add_law_options(compare, compare_o);
  compare->add_option("--spec", spec_path, "ensemble spec JSON (source)");
  compare->add_option("--source", compare_source, "measure JSON (source, instead of --spec)");
  compare->add_option("--n", n_override, "matrix size (overrides n in the ensemble JSON)");
  compare->add_option("--trials", trials, "number of samples")->capture_default_str();
  compare->add_option("--bins", bins, "histogram bins (default ceil(sqrt(n trials)))");

  std::string conv_a, conv_b, conv_grid;
  double conv_eps = 0.0, conv_truncate = 0.0;
  auto* convolve = app.add_subcommand("convolve", "Density of the free additive convolution (CSV lambda,rho)");
  convolve->add_option("--a", conv_a, "measure JSON")->required();
  convolve->add_option("--b", conv_b, "measure JSON")->required();
  convolve->add_option("--grid", conv_grid, "lo:hi:step")->required();
  convolve->add_option("--eps", conv_eps, "inversion height (default from solver config)");
  convolve->add_option("--truncate", conv_truncate, "initial truncation level for unbounded measures");

  std::string potential_path, eq_grid;
  auto* equilibrium = app.add_subcommand("equilibrium", "Support and density of the equilibrium measure");
  equilibrium->add_option("--potential", potential_path, "potential JSON")->required();
  equilibrium->add_option("--grid", eq_grid, "lo:hi:step (default 401 points across the support)");

  std::string family = "gue", n_list_text = "64,128,256,512", z_text, law_text = "real-gaussian";
  double w = 1.0;
  auto* converge = app.add_subcommand("converge", "Variance decay of g_n(z) (or h_n(z)) across n");
  converge->add_option("--spec", spec_path, "ensemble spec JSON");
  converge->add_option("--family", family, "family when no spec is given")->capture_default_str();
  converge->add_option("--w", w, "scale when no spec is given")->capture_default_str();
  converge->add_option("--n-list", n_list_text, "comma separated sizes")->capture_default_str();
  converge->add_option("--trials", trials, "trials per n")->capture_default_str();
  converge->add_option("--z", z_text, "spectral parameter (default 5wi, or 0.2 for haar_unitary)");

  auto* expand = app.add_subcommand("expand", "n (E g_n - f) against the first-order coefficient");
  expand->add_option("--law", law_text, "entry law")->capture_default_str();
  expand->add_option("--w", w, "scale")->capture_default_str();
  expand->add_option("--n-list", n_list_text, "comma separated sizes")->capture_default_str();
  expand->add_option("--trials", trials, "trials per n")->capture_default_str();
  expand->add_option("--z", z_text, "spectral parameter (default 5wi)");

  int n_single = 512;
  std::string z2_text;
  auto* clt = app.add_subcommand("clt", "Covariance and normality of n (g_n - E g_n)");
  clt->add_option("--law", law_text, "entry law")->capture_default_str();
  clt->add_option("--w", w, "scale")->capture_default_str();
  clt->add_option("--n", n_single, "matrix size")->capture_default_str();
  clt->add_option("--trials", trials, "number of samples")->capture_default_str();
  clt->add_option("--z1", z_text, "first point (default 5wi)");
  clt->add_option("--z2", z2_text, "second point (default conj z1)");

  std::string laws_text = "rademacher,uniform,cauchy";
  auto* lindeberg = app.add_subcommand("lindeberg", "KS to the semicircle for several entry laws");
  lindeberg->add_option("--laws", laws_text, "comma separated entry laws")->capture_default_str();
  lindeberg->add_option("--n", n_single, "matrix size")->capture_default_str();
  lindeberg->add_option("--trials", trials, "samples per law")->capture_default_str();
  lindeberg->add_option("--w", w, "scale")->capture_default_str();

  McmcParams mcmc;
  auto* mvcheck = app.add_subcommand("mvcheck", "Log-gas Monte Carlo check of E (1/n) sum lambda V'(lambda) = 1");
  mvcheck->add_option("--potential", potential_path, "potential JSON")->required();
  mvcheck->add_option("--n", n_single, "number of particles")->capture_default_str();
  mvcheck->add_option("--sweeps", mcmc.sweeps, "recorded sweeps")->capture_default_str();
  mvcheck->add_option("--burn-in", mcmc.burn_in, "discarded sweeps")->capture_default_str();
  mvcheck->add_option("--step", mcmc.proposal_scale, "proposal scale (0 = 0.1/sqrt(n))")->capture_default_str();
  mvcheck->add_option("--thin", mcmc.thin, "keep every thin-th sweep")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  std::vector<std::string> args(argv, argv + argc);
  std::string started = utc_timestamp();
  try {
    SolverConfig cfg = g.solver.empty() ? SolverConfig{} : load_solver(g.solver);
    cfg.validate();
    g.threads = resolve_threads(g.threads);
    const fs::path out = g.out;
    RunOptions opt{g.seed, g.threads};
    Outcome res;
    std::string command;

    if (*density) {
      command = "density";
      if (density_o.grid.empty()) throw InputError("--grid is required");
      std::vector<double> grid = parse_grid(density_o.grid);
      Tabulated t = tabulate_law(density_o, grid, cfg);
      write_csv(out, {"lambda", "rho"}, columns_to_rows(t.grid, t.values));
      res.config = law_json(density_o);
      res.outputs = {out.string()};
      double mass = trapezoid_mass(GridDensity{t.grid, t.values, Domain::Real});
      res.summary = "density: " + std::to_string(t.grid.size()) + " points, mass=" + fmt(mass);
      if (t.inverted) {
        res.summary += ", eps=" + fmt(t.epsilon) + ", max_residual=" + fmt(t.max_residual);
        if (t.negative_warning) res.summary += ", warning=negative values clamped";
      }
    } else if (*sample) {
      command = "sample";
      EnsembleSpec spec = spec_with_n(spec_path, n_override);
      if (trials < 1) throw InputError("--trials must be positive");
      auto spectra = samples_of(spec, trials, g);
      fs::create_directories(out);
      const char* head = spec.family == Family::HaarUnitary ? "theta" : "lambda";
      for (std::size_t t = 0; t < spectra.size(); ++t) {
        char name[32];
        std::snprintf(name, sizeof name, "trial_%04zu.csv", t);
        std::vector<std::vector<double>> rows;
        for (double x : spectra[t]) rows.push_back({x});
        write_csv(out / name, {head}, rows);
        res.outputs.push_back((out / name).string());
      }
      res.config = {{"spec", to_json(spec)}, {"trials", trials}};
      res.summary = "sample: " + std::to_string(trials) + " spectra of " + std::string(to_string(spec.family)) +
                    " n=" + std::to_string(spec.n);
    } else if (*compare) {
      command = "compare";
      SpectralMeasure ref = reference_measure(compare_o, cfg);
      res.config = law_json(compare_o);
      Json report = {{"reference", to_json(ref)}};
      if (!compare_source.empty()) {
        SpectralMeasure src = load_measure(compare_source);
        double ks = ks_distance(src, ref).value;
        report["ks"] = ks;
        res.config["source"] = to_json(src);
        res.summary = "compare: KS=" + fmt(ks);
      } else {
        EnsembleSpec spec = spec_with_n(spec_path, n_override);
        if (trials < 1) throw InputError("--trials must be positive");
        auto spectra = samples_of(spec, trials, g);
        std::vector<double> pooled;
        for (const auto& s : spectra) pooled.insert(pooled.end(), s.begin(), s.end());
        std::sort(pooled.begin(), pooled.end());
        Domain dom = spec.family == Family::HaarUnitary ? Domain::Circle : Domain::Real;
        SpectralMeasure emp = empirical_measure(pooled, dom);
        double ks = ks_distance(emp, ref).value;
        std::vector<double> per_trial;
        for (const auto& s : spectra) per_trial.push_back(ks_distance(empirical_measure(s, dom), ref).value);
        double mean_ks = 0.0;
        for (double v : per_trial) mean_ks += v;
        mean_ks /= static_cast<double>(per_trial.size());

        int nb = bins > 0 ? bins
                          : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(spec.n) * trials)));
        double lo = pooled.front(), hi = pooled.back();
        if (hi <= lo) hi = lo + 1.0;
        double width = (hi - lo) / nb;
        std::vector<double> counts(static_cast<std::size_t>(nb), 0.0);
        for (double x : pooled) {
          auto k = static_cast<std::size_t>(std::min<double>(nb - 1, std::floor((x - lo) / width)));
          counts[k] += 1.0;
        }
        std::vector<std::vector<double>> rows;
        for (int k = 0; k < nb; ++k) {
          double mid = lo + (k + 0.5) * width;
          double emp_density = counts[static_cast<std::size_t>(k)] / (static_cast<double>(pooled.size()) * width);
          double ref_density = ref.as_atoms() ? measure_of(ref, lo + k * width, lo + (k + 1) * width) / width
                                              : density_at(ref, mid);
          rows.push_back({mid, emp_density, ref_density});
        }
        fs::path hist = sibling(out, "_hist.csv");
        write_csv(hist, {"midpoint", "empirical", "reference"}, rows);
        res.outputs.push_back(hist.string());
        report.update({{"ks", ks}, {"ks_per_trial", per_trial}, {"mean_ks", mean_ks}, {"bins", nb},
                       {"samples", pooled.size()}});
        res.config["spec"] = to_json(spec);
        res.config["trials"] = trials;
        res.config["bins"] = nb;
        res.summary = "compare: KS=" + fmt(ks) + " (pooled), mean per-trial KS=" + fmt(mean_ks) + ", bins=" +
                      std::to_string(nb);
      }
      report["config"] = res.config;
      report["seed"] = g.seed;
      write_json(out, report);
      res.outputs.insert(res.outputs.begin(), out.string());
    } else if (*convolve) {
      command = "convolve";
      SpectralMeasure A = load_measure(conv_a), B = load_measure(conv_b);
      std::vector<double> grid = parse_grid(conv_grid);
      double eps = conv_eps > 0.0 ? conv_eps : cfg.epsilon_inversion;
      double worst = 0.0;
      ComplexEvaluator f([&](Complex z) {
        SubordinationState s = conv_truncate > 0.0 ? solve_free_addition_truncated(z, A, B, conv_truncate, cfg)
                                                   : solve_free_addition(z, A, B, cfg);
        worst = std::max(worst, s.residual);
        return s.f;
      });
      Inversion inv = invert_stieltjes(f, grid, eps);
      write_csv(out, {"lambda", "rho"}, columns_to_rows(grid, inv.raw));
      res.config = {{"a", to_json(A)}, {"b", to_json(B)}, {"grid", conv_grid}, {"eps", eps}};
      if (conv_truncate > 0.0) res.config["truncate"] = conv_truncate;
      res.outputs = {out.string()};
      res.summary = "convolve: " + std::to_string(grid.size()) + " points, mass=" + fmt(inv.raw_mass) + ", eps=" + fmt(eps) +
                    ", max_residual=" + fmt(worst);
      if (inv.negative_warning) res.summary += ", warning=negative values clamped";
    } else if (*equilibrium) {
      command = "equilibrium";
      PotentialPolynomial V = load_potential(potential_path);
      SupportInterval s = solve_support(V, cfg);
      std::vector<double> grid;
      if (eq_grid.empty()) {
        for (int k = 0; k <= 400; ++k) grid.push_back(s.a + (s.b - s.a) * k / 400.0);
      } else {
        grid = parse_grid(eq_grid);
      }
      std::vector<double> rho;
      for (double x : grid) rho.push_back(equilibrium_density(V, s, x));
      double mass = equilibrium_mass(V, s);
      SingularEquationReport seq =
          verify_singular_equation(V, s, [&](double x) { return equilibrium_density(V, s, x); });
      fs::path csv = sibling(out, ".csv");
      write_csv(csv, {"lambda", "rho"}, columns_to_rows(grid, rho));
      Json report = {{"a", s.a},
                     {"b", s.b},
                     {"residual_q0", s.residual_q0},
                     {"residual_q1", s.residual_q1},
                     {"iterations", s.iterations},
                     {"mass", mass},
                     {"polynomial", equilibrium_polynomial(V, s)},
                     {"singular_equation_max_deviation", seq.max_deviation},
                     {"potential", to_json(V)}};
      write_json(out, report);
      res.config = {{"potential", to_json(V)}};
      if (!eq_grid.empty()) res.config["grid"] = eq_grid;
      res.outputs = {out.string(), csv.string()};
      res.summary = "equilibrium: support [" + fmt(s.a) + ", " + fmt(s.b) + "], mass=" + fmt(mass) +
                    ", singular-equation deviation=" + fmt(seq.max_deviation);
    } else {
      ExperimentReport rep;
      if (*converge) {
        command = "converge";
        EnsembleSpec spec;
        if (!spec_path.empty()) {
          spec = load_spec(spec_path);
        } else {
          spec.family = parse_family(family);
          spec.w = w;
        }
        std::vector<int> n_list = parse_int_list(n_list_text);
        Complex z = !z_text.empty() ? parse_complex(z_text)
                    : spec.family == Family::HaarUnitary ? Complex(0.2, 0.0)
                                                         : Complex(0.0, 5.0 * spec.w);
        rep = run_variance_sweep(spec, n_list, trials, z, opt);
      } else if (*expand) {
        command = "expand";
        Complex z = z_text.empty() ? Complex(0.0, 5.0 * w) : parse_complex(z_text);
        rep = run_expansion_check(parse_entry_law(law_text), w, parse_int_list(n_list_text), trials, z, opt);
      } else if (*clt) {
        command = "clt";
        Complex z1 = z_text.empty() ? Complex(0.0, 5.0 * w) : parse_complex(z_text);
        Complex z2 = z2_text.empty() ? std::conj(z1) : parse_complex(z2_text);
        rep = run_clt_check(w, n_single, trials, z1, z2, opt, parse_entry_law(law_text));
      } else if (*lindeberg) {
        command = "lindeberg";
        std::vector<EntryLaw> laws;
        std::stringstream ss(laws_text);
        std::string item;
        while (std::getline(ss, item, ',')) laws.push_back(parse_entry_law(item));
        rep = run_lindeberg_demo(laws, n_single, trials, opt, w);
      } else if (*mvcheck) {
        command = "mvcheck";
        PotentialPolynomial V = load_potential(potential_path);
        rep = run_mv_check(V, n_single, mcmc, opt);
      }
      write_json(out, to_json(rep));
      res.outputs = {out.string()};
      if (!rep.per_n.empty()) {
        fs::path csv = sibling(out, ".csv");
        write_text_atomic(csv, report_csv(rep));
        res.outputs.push_back(csv.string());
      }
      res.config = rep.config;
      int passed = static_cast<int>(std::count_if(rep.checks.begin(), rep.checks.end(), [](const Check& c) { return c.pass; }));
      res.summary = command + ": " + (rep.pass() ? "pass" : "FAIL") + " (" + std::to_string(passed) + "/" +
                    std::to_string(rep.checks.size()) + " checks)";
      for (const auto& c : rep.checks)
        if (!c.pass) res.summary += ", " + c.name + "=" + fmt(c.value);
      if (rep.slope) res.summary += ", slope=" + fmt(rep.slope->slope);
      if (!rep.warnings.empty()) res.summary += ", warnings=" + std::to_string(rep.warnings.size());
    }

    RunManifest m;
    m.command = command;
    m.argv = args;
    m.config = res.config;
    m.config["solver"] = to_json(cfg);
    m.seed = g.seed;
    m.threads = g.threads;
    m.started = started;
    m.finished = utc_timestamp();
    m.outputs = res.outputs;
    fs::path manifest = *sample ? out / "manifest.json" : fs::path(out.string() + ".manifest.json");
    write_json(manifest, to_json(m));
    std::cout << res.summary << " -> " << out.string() << "\n";
    return 0;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << " (residual " << fmt(e.residual()) << ")\n";
    return 2;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const Json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace rmt::cli
