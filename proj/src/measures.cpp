#include "rmt/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "rmt/error.hpp"
#include "rmt/limit_laws.hpp"
#include "rmt/quadrature.hpp"

namespace rmt {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;
constexpr double kAtomMassTol = 1e-9;
constexpr double kGridMassTol = 1e-6;

std::string at_index(const char* what, std::size_t i) {
  std::ostringstream os;
  os << what << " at index " << i;
  return os.str();
}

int beta_param(const Named& n) {
  auto it = n.params.find("beta");
  return it == n.params.end() ? 2 : static_cast<int>(it->second);
}

double param(const Named& n, const char* key) {
  auto it = n.params.find(key);
  if (it == n.params.end()) throw InputError(std::string("missing parameter '") + key + "'");
  return it->second;
}

void require_real_line(const SpectralMeasure& m) {
  if (m.domain() != Domain::Real) throw InputError("circular measure has no Stieltjes transform");
}

void require_off_axis(Complex z) {
  if (z.imag() == 0.0 || !std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw InputError("real spectral parameter");
}

// Grid extended by one period on each side for circular densities, so the
// wrap segment is an ordinary segment.
struct Segments {
  std::vector<double> x;
  std::vector<double> v;
};

Segments segments_of(const GridDensity& g) {
  Segments s{g.grid, g.values};
  if (g.domain == Domain::Circle) {
    s.x.insert(s.x.begin(), g.grid.back() - kTwoPi);
    s.v.insert(s.v.begin(), g.values.back());
    s.x.push_back(g.grid.front() + kTwoPi);
    s.v.push_back(g.values.front());
  }
  return s;
}

// Cumulative trapezoid integral of a piecewise-linear function.
std::vector<double> cumulative(const Segments& s) {
  std::vector<double> c(s.x.size(), 0.0);
  for (std::size_t k = 1; k < s.x.size(); ++k)
    c[k] = c[k - 1] + 0.5 * (s.v[k] + s.v[k - 1]) * (s.x[k] - s.x[k - 1]);
  return c;
}

// Integral of the interpolant from s.x[0] to x.
double partial_integral(const Segments& s, const std::vector<double>& c, double x) {
  if (x <= s.x.front()) return 0.0;
  if (x >= s.x.back()) return c.back();
  auto k = static_cast<std::size_t>(std::upper_bound(s.x.begin(), s.x.end(), x) - s.x.begin()) - 1;
  double h = s.x[k + 1] - s.x[k];
  double t = x - s.x[k];
  double slope = (s.v[k + 1] - s.v[k]) / h;
  return c[k] + s.v[k] * t + 0.5 * slope * t * t;
}

double interpolate(const Segments& s, double x) {
  if (x < s.x.front() || x > s.x.back()) return 0.0;
  auto it = std::upper_bound(s.x.begin(), s.x.end(), x);
  if (it == s.x.end()) return s.v.back();
  auto k = static_cast<std::size_t>(it - s.x.begin()) - 1;
  double t = (x - s.x[k]) / (s.x[k + 1] - s.x[k]);
  return (1.0 - t) * s.v[k] + t * s.v[k + 1];
}

// Precomputed CDF of a measure, reused across many evaluation points.
class CdfTable {
 public:
  explicit CdfTable(const SpectralMeasure& m) : m_(m) {
    if (auto a = m.as_atoms()) {
      prefix_.resize(a->weights.size() + 1, 0.0);
      std::partial_sum(a->weights.begin(), a->weights.end(), prefix_.begin() + 1);
    } else if (auto g = m.as_grid()) {
      seg_ = segments_of(*g);
      cum_ = cumulative(seg_);
      if (g->domain == Domain::Circle) {
        origin_ = partial_integral(seg_, cum_, 0.0);
        total_ = partial_integral(seg_, cum_, kTwoPi) - origin_;
      } else {
        total_ = cum_.back();
      }
    }
  }

  double right(double x) const {
    if (auto a = m_.as_atoms()) {
      auto k = std::upper_bound(a->locations.begin(), a->locations.end(), x) - a->locations.begin();
      return prefix_[static_cast<std::size_t>(k)];
    }
    return continuous(x);
  }

  double left(double x) const {
    if (auto a = m_.as_atoms()) {
      auto k = std::lower_bound(a->locations.begin(), a->locations.end(), x) - a->locations.begin();
      return prefix_[static_cast<std::size_t>(k)];
    }
    return continuous(x);
  }

  // Points where the CDF jumps or changes shape.
  std::vector<double> breakpoints() const {
    if (auto a = m_.as_atoms()) return a->locations;
    if (auto g = m_.as_grid()) return g->grid;
    auto [lo, hi] = m_.support();
    std::vector<double> pts(4097);
    for (std::size_t k = 0; k < pts.size(); ++k)
      pts[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(pts.size() - 1);
    return pts;
  }

 private:
  double continuous(double x) const {
    if (auto g = m_.as_grid()) {
      if (g->domain == Domain::Circle) {
        x = std::clamp(x, 0.0, kTwoPi);
        return std::clamp((partial_integral(seg_, cum_, x) - origin_) / total_, 0.0, 1.0);
      }
      return std::clamp(partial_integral(seg_, cum_, x) / total_, 0.0, 1.0);
    }
    const Named& n = *m_.as_named();
    switch (n.law) {
      case NamedLaw::Semicircle:
        return semicircle_cdf(x, param(n, "w"), beta_param(n));
      case NamedLaw::Laguerre:
        return laguerre_cdf(x, param(n, "a"), beta_param(n));
      case NamedLaw::UniformCircle:
        return std::clamp(x / kTwoPi, 0.0, 1.0);
    }
    return 0.0;
  }

  const SpectralMeasure& m_;
  std::vector<double> prefix_;
  Segments seg_;
  std::vector<double> cum_;
  double origin_ = 0.0;
  double total_ = 1.0;
};

// \int rho(l) / (l - z) dl over one segment of a piecewise-linear density.
// Far from the segment the closed form cancels, so a series in
// u = h / (x0 - z) is used instead.
Complex segment_stieltjes(double x0, double x1, double v0, double v1, Complex z) {
  double h = x1 - x0;
  double s = (v1 - v0) / h;
  Complex u = h / (x0 - z);
  if (std::abs(u) < 0.25) {
    Complex log_term = 0.0, tail = 0.0, p = u;
    for (int k = 1; k <= 60; ++k) {
      double sign = (k % 2 == 1) ? 1.0 : -1.0;
      log_term += sign * p / static_cast<double>(k);
      tail += sign * p / static_cast<double>(k + 1);
      if (std::abs(p) < 1e-18) break;
      p *= u;
    }
    return v0 * log_term + s * h * tail;
  }
  Complex rho_z = v0 + s * (z - x0);
  return s * h + rho_z * (std::log(Complex(x1) - z) - std::log(Complex(x0) - z));
}

Complex segment_stieltjes_derivative(double x0, double x1, double v0, double v1, Complex z) {
  double h = x1 - x0;
  double s = (v1 - v0) / h;
  Complex u = h / (x0 - z);
  if (std::abs(u) < 0.25) {
    Complex series = 0.0, p = 1.0;
    for (int k = 1; k <= 60; ++k) {
      double sign = (k % 2 == 1) ? 1.0 : -1.0;
      series += sign * static_cast<double>(k) * p / static_cast<double>(k + 1);
      if (std::abs(p) < 1e-18) break;
      p *= u;
    }
    return v0 * u * u / (h * (1.0 + u)) + s * u * u * series;
  }
  Complex rho_z = v0 + s * (z - x0);
  Complex log_term = std::log(Complex(x1) - z) - std::log(Complex(x0) - z);
  return s * log_term + rho_z * (1.0 / (Complex(x0) - z) - 1.0 / (Complex(x1) - z));
}

Complex herglotz_kernel(double theta, Complex z) {
  Complex e = std::polar(1.0, theta);
  return (e + z) / (e - z);
}

}  // namespace

// ---------------------------------------------------------------------------

SpectralMeasure SpectralMeasure::atoms(std::vector<double> locations, std::vector<double> weights,
                                       Domain domain) {
  if (locations.empty()) throw InputError("empty atom list");
  if (locations.size() != weights.size()) throw InputError("atom locations and weights differ in length");
  std::vector<std::pair<double, double>> pairs(locations.size());
  double total = 0.0;
  for (std::size_t i = 0; i < locations.size(); ++i) {
    double x = locations[i];
    if (!std::isfinite(x)) throw InputError(at_index("non-finite atom location", i));
    if (!std::isfinite(weights[i]) || weights[i] < 0.0)
      throw InputError(at_index("negative atom weight", i));
    if (domain == Domain::Circle) {
      x = std::fmod(x, kTwoPi);
      if (x < 0.0) x += kTwoPi;
      if (x >= kTwoPi) x = 0.0;
    }
    pairs[i] = {x, weights[i]};
    total += weights[i];
  }
  if (std::abs(total - 1.0) > kAtomMassTol) throw InputError("atom weights do not sum to 1");
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const auto& p, const auto& q) { return p.first < q.first; });
  Atoms a;
  a.domain = domain;
  for (const auto& [x, w] : pairs) {
    if (!a.locations.empty() && a.locations.back() == x) {
      a.weights.back() += w;
    } else {
      a.locations.push_back(x);
      a.weights.push_back(w);
    }
  }
  return SpectralMeasure(std::move(a));
}

SpectralMeasure SpectralMeasure::point_mass(double location, Domain domain) {
  return atoms({location}, {1.0}, domain);
}

SpectralMeasure SpectralMeasure::density(std::vector<double> grid, std::vector<double> values,
                                         Domain domain) {
  if (grid.size() < 2) throw InputError("density grid needs at least two points");
  if (grid.size() != values.size()) throw InputError("density grid and values differ in length");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) throw InputError(at_index("non-finite grid point", i));
    if (i > 0 && !(grid[i] > grid[i - 1])) throw InputError(at_index("grid not strictly increasing", i));
    if (!std::isfinite(values[i]) || values[i] < 0.0)
      throw InputError(at_index("negative density value", i));
  }
  if (domain == Domain::Circle && (grid.front() < 0.0 || grid.back() >= kTwoPi))
    throw InputError("circular grid must lie in [0, 2pi)");
  GridDensity g{std::move(grid), std::move(values), domain};
  double mass = trapezoid_mass(g);
  if (std::abs(mass - 1.0) > kGridMassTol) {
    std::ostringstream os;
    os << "density mass " << mass << " differs from 1";
    throw InputError(os.str());
  }
  return SpectralMeasure(std::move(g));
}

SpectralMeasure SpectralMeasure::named(NamedLaw law, std::map<std::string, double> params) {
  Named n{law, std::move(params)};
  auto check_beta = [&] {
    int b = beta_param(n);
    if (b != 1 && b != 2 && b != 4) throw InputError("beta must be 1, 2 or 4");
    if (n.params.count("beta") && n.params.at("beta") != static_cast<double>(b))
      throw InputError("beta must be 1, 2 or 4");
  };
  switch (law) {
    case NamedLaw::Semicircle:
      if (!(param(n, "w") > 0.0) || !std::isfinite(param(n, "w"))) throw InputError("w must be positive");
      check_beta();
      break;
    case NamedLaw::Laguerre:
      if (!(param(n, "a") > 0.0) || !std::isfinite(param(n, "a"))) throw InputError("a must be positive");
      check_beta();
      break;
    case NamedLaw::UniformCircle:
      break;
  }
  return SpectralMeasure(std::move(n));
}

SpectralMeasure SpectralMeasure::semicircle(double w, int beta) {
  return named(NamedLaw::Semicircle, {{"w", w}, {"beta", static_cast<double>(beta)}});
}

SpectralMeasure SpectralMeasure::laguerre(double a, int beta) {
  return named(NamedLaw::Laguerre, {{"a", a}, {"beta", static_cast<double>(beta)}});
}

SpectralMeasure SpectralMeasure::uniform_circle() { return named(NamedLaw::UniformCircle); }

Domain SpectralMeasure::domain() const {
  if (auto a = as_atoms()) return a->domain;
  if (auto g = as_grid()) return g->domain;
  return as_named()->law == NamedLaw::UniformCircle ? Domain::Circle : Domain::Real;
}

std::pair<double, double> SpectralMeasure::support() const {
  if (auto a = as_atoms()) return {a->locations.front(), a->locations.back()};
  if (auto g = as_grid()) {
    if (g->domain == Domain::Circle) return {0.0, kTwoPi};
    return {g->grid.front(), g->grid.back()};
  }
  const Named& n = *as_named();
  switch (n.law) {
    case NamedLaw::Semicircle: {
      double r = 2.0 * std::sqrt(static_cast<double>(beta_param(n))) * param(n, "w");
      return {-r, r};
    }
    case NamedLaw::Laguerre: {
      double a = param(n, "a");
      return {0.0, 4.0 * beta_param(n) * a * a};
    }
    case NamedLaw::UniformCircle:
      return {0.0, kTwoPi};
  }
  return {0.0, 0.0};
}

// ---------------------------------------------------------------------------

ComplexEvaluator::ComplexEvaluator(Function f, Function derivative, double min_abs_imag)
    : f_(std::move(f)), df_(std::move(derivative)), min_abs_imag_(min_abs_imag) {
  if (!f_) throw InputError("empty evaluator");
}

Complex ComplexEvaluator::derivative(Complex z) const {
  if (df_) return df_(z);
  double h = 1e-6 * std::max(1.0, std::abs(z));
  if (z.imag() != 0.0) h = std::min(h, 0.1 * std::abs(z.imag()));
  return (f_(z + h) - f_(z - h)) / (2.0 * h);
}

// ---------------------------------------------------------------------------

double trapezoid_mass(const GridDensity& g) {
  Segments s = segments_of(g);
  auto c = cumulative(s);
  if (g.domain == Domain::Circle) return partial_integral(s, c, kTwoPi) - partial_integral(s, c, 0.0);
  return c.back();
}

SpectralMeasure empirical_measure(std::span<const double> eigenvalues, Domain domain) {
  if (eigenvalues.empty()) throw InputError("empty spectrum");
  std::vector<double> x(eigenvalues.begin(), eigenvalues.end());
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!std::isfinite(x[i])) throw InputError(at_index("non-finite eigenvalue", i));
  std::vector<double> w(x.size(), 1.0 / static_cast<double>(x.size()));
  return SpectralMeasure::atoms(std::move(x), std::move(w), domain);
}

double cdf(const SpectralMeasure& m, double x) { return CdfTable(m).right(x); }

double cdf_left(const SpectralMeasure& m, double x) { return CdfTable(m).left(x); }

double measure_of(const SpectralMeasure& m, double lo, double hi) {
  if (hi < lo) return 0.0;
  CdfTable t(m);
  return t.right(hi) - t.left(lo);
}

double density_at(const SpectralMeasure& m, double x) {
  if (m.as_atoms()) throw InputError("atomic measure has no density");
  if (auto g = m.as_grid()) {
    if (g->domain == Domain::Circle) {
      if (x < 0.0 || x >= kTwoPi) return 0.0;
    }
    return interpolate(segments_of(*g), x);
  }
  const Named& n = *m.as_named();
  switch (n.law) {
    case NamedLaw::Semicircle:
      return semicircle_density(x, param(n, "w"), beta_param(n));
    case NamedLaw::Laguerre:
      return laguerre_density(x, param(n, "a"), beta_param(n));
    case NamedLaw::UniformCircle:
      return (x >= 0.0 && x < kTwoPi) ? 1.0 / kTwoPi : 0.0;
  }
  return 0.0;
}

Complex stieltjes_eval(const SpectralMeasure& m, Complex z) {
  require_off_axis(z);
  require_real_line(m);
  if (auto a = m.as_atoms()) {
    Complex sum = 0.0;
    for (std::size_t k = 0; k < a->locations.size(); ++k) sum += a->weights[k] / (a->locations[k] - z);
    return sum;
  }
  if (auto g = m.as_grid()) {
    Complex sum = 0.0;
    for (std::size_t k = 0; k + 1 < g->grid.size(); ++k)
      sum += segment_stieltjes(g->grid[k], g->grid[k + 1], g->values[k], g->values[k + 1], z);
    return sum;
  }
  const Named& n = *m.as_named();
  if (n.law == NamedLaw::Semicircle) return semicircle_stieltjes(z, param(n, "w"), beta_param(n));
  return laguerre_stieltjes(z, param(n, "a"), beta_param(n));
}

Complex stieltjes_derivative(const SpectralMeasure& m, Complex z) {
  require_off_axis(z);
  require_real_line(m);
  if (auto a = m.as_atoms()) {
    Complex sum = 0.0;
    for (std::size_t k = 0; k < a->locations.size(); ++k) {
      Complex d = a->locations[k] - z;
      sum += a->weights[k] / (d * d);
    }
    return sum;
  }
  if (auto g = m.as_grid()) {
    Complex sum = 0.0;
    for (std::size_t k = 0; k + 1 < g->grid.size(); ++k)
      sum += segment_stieltjes_derivative(g->grid[k], g->grid[k + 1], g->values[k], g->values[k + 1], z);
    return sum;
  }
  const Named& n = *m.as_named();
  if (n.law == NamedLaw::Semicircle) return semicircle_stieltjes_derivative(z, param(n, "w"), beta_param(n));
  return laguerre_stieltjes_derivative(z, param(n, "a"), beta_param(n));
}

Complex herglotz_eval(const SpectralMeasure& m, Complex z) {
  if (m.domain() != Domain::Circle) throw InputError("Herglotz transform needs a circular measure");
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw InputError("non-finite spectral parameter");
  if (std::abs(std::abs(z) - 1.0) <= 1e-12) throw InputError("on unit circle");
  if (auto a = m.as_atoms()) {
    Complex sum = 0.0;
    for (std::size_t k = 0; k < a->locations.size(); ++k) sum += a->weights[k] * herglotz_kernel(a->locations[k], z);
    return sum;
  }
  if (auto g = m.as_grid()) {
    Segments s = segments_of(*g);
    const QuadratureRule& rule = gauss_legendre(16);
    Complex sum = 0.0;
    for (std::size_t k = 0; k + 1 < s.x.size(); ++k) {
      double lo = std::max(s.x[k], 0.0), hi = std::min(s.x[k + 1], kTwoPi);
      if (hi <= lo) continue;
      double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
      for (Eigen::Index q = 0; q < rule.nodes.size(); ++q) {
        double t = mid + half * rule.nodes[q];
        double r = (t - s.x[k]) / (s.x[k + 1] - s.x[k]);
        double rho = (1.0 - r) * s.v[k] + r * s.v[k + 1];
        sum += half * rule.weights[q] * rho * herglotz_kernel(t, z);
      }
    }
    return sum / trapezoid_mass(*g);
  }
  return circular_limit_herglotz(z);
}

ComplexEvaluator stieltjes_evaluator(const SpectralMeasure& m) {
  require_real_line(m);
  return ComplexEvaluator([m](Complex z) { return stieltjes_eval(m, z); },
                          [m](Complex z) { return stieltjes_derivative(m, z); });
}

Inversion invert_stieltjes(const ComplexEvaluator& f, std::span<const double> grid, double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw InputError("epsilon must be positive");
  if (epsilon < f.min_abs_imag()) throw InputError("epsilon below the evaluator's validity region");
  if (grid.size() < 2) throw InputError("inversion grid needs at least two points");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw InputError(at_index("grid not strictly increasing", i));

  std::vector<double> values(grid.size());
  double most_negative = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    double v = f(Complex(grid[k], epsilon)).imag() / M_PI;
    most_negative = std::min(most_negative, v);
    values[k] = std::max(v, 0.0);
  }
  GridDensity g{std::vector<double>(grid.begin(), grid.end()), values, Domain::Real};
  double mass = trapezoid_mass(g);
  if (!(mass > 0.0) || !std::isfinite(mass)) throw NumericalError("inverted density has no mass on the grid");
  for (double& v : g.values) v /= mass;
  return Inversion{SpectralMeasure::density(std::move(g.grid), std::move(g.values)), epsilon,
                   most_negative < -1e-6, most_negative, std::move(values), mass};
}

NevanlinnaReport nevanlinna_check(const ComplexEvaluator& f, std::span<const Complex> points) {
  NevanlinnaReport r;
  for (Complex z : points) {
    bool bad = z.imag() == 0.0;
    if (!bad) {
      Complex v = f(z);
      bad = !(v.imag() * z.imag() > 0.0);
    }
    if (bad) r.violations.push_back(z);
  }
  const double ys[4] = {1.0, 10.0, 100.0, 1000.0};
  double sup = 0.0;
  for (int k = 0; k < 4; ++k) {
    r.tail[k] = ys[k] * std::abs(f(Complex(0.0, ys[k])));
    sup = std::max(sup, r.tail[k]);
  }
  r.tail_ok = std::abs(r.tail[3] - 1.0) <= 0.1 && sup <= 1.1;
  r.ok = r.violations.empty() && r.tail_ok;
  return r;
}

double sup_cdf_gap(const CdfFunction& f, const CdfFunction& f_left, const CdfFunction& g,
                   const CdfFunction& g_left, std::span<const double> points) {
  double gap = 0.0;
  for (double x : points) {
    gap = std::max(gap, std::abs(f(x) - g(x)));
    gap = std::max(gap, std::abs(f_left(x) - g_left(x)));
  }
  return gap;
}

KolmogorovDistance ks_distance(const SpectralMeasure& m1, const SpectralMeasure& m2) {
  if (m1.domain() != m2.domain()) throw InputError("cannot compare circular and real-line measures");
  CdfTable t1(m1), t2(m2);
  std::vector<double> pts = t1.breakpoints();
  auto more = t2.breakpoints();
  pts.insert(pts.end(), more.begin(), more.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  double gap = sup_cdf_gap([&](double x) { return t1.right(x); }, [&](double x) { return t1.left(x); },
                           [&](double x) { return t2.right(x); }, [&](double x) { return t2.left(x); }, pts);
  return KolmogorovDistance{std::min(gap, 1.0)};
}

SpectralMeasure truncate(const SpectralMeasure& m, double T) {
  if (!(T > 0.0)) throw InputError("truncation level must be positive");
  require_real_line(m);
  if (auto a = m.as_atoms()) {
    std::vector<double> x, w;
    double kept = 0.0;
    for (std::size_t k = 0; k < a->locations.size(); ++k) {
      if (std::abs(a->locations[k]) <= T) {
        x.push_back(a->locations[k]);
        w.push_back(a->weights[k]);
        kept += a->weights[k];
      }
    }
    if (x.empty() || kept <= 0.0) throw InputError("truncation removes all mass");
    for (double& v : w) v /= kept;
    return SpectralMeasure::atoms(std::move(x), std::move(w));
  }
  auto [lo, hi] = m.support();
  if (lo >= -T && hi <= T) return m;
  if (auto g = m.as_grid()) {
    Segments s = segments_of(*g);
    std::vector<double> x{std::max(lo, -T)}, v{interpolate(s, x[0])};
    for (std::size_t k = 0; k < g->grid.size(); ++k) {
      if (g->grid[k] > x[0] && g->grid[k] < std::min(hi, T)) {
        x.push_back(g->grid[k]);
        v.push_back(g->values[k]);
      }
    }
    x.push_back(std::min(hi, T));
    v.push_back(interpolate(s, x.back()));
    GridDensity cut{x, v, Domain::Real};
    double mass = trapezoid_mass(cut);
    if (!(mass > 0.0)) throw InputError("truncation removes all mass");
    for (double& y : v) y /= mass;
    return SpectralMeasure::density(std::move(x), std::move(v));
  }
  throw InputError("named law extends beyond the truncation level");
}

std::vector<double> uniform_grid(double lo, double hi, double step) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(step > 0.0) || !(hi > lo))
    throw InputError("grid needs lo < hi and a positive step");
  auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 0.5)) + 1;
  std::vector<double> g(count);
  for (std::size_t k = 0; k < count; ++k) g[k] = lo + step * static_cast<double>(k);
  g.back() = std::min(g.back(), hi);
  if (count >= 2 && !(g.back() > g[count - 2])) g.pop_back();
  return g;
}

}  // namespace rmt
