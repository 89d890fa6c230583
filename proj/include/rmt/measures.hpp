#pragma once

#include <array>
#include <complex>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace rmt {

using Complex = std::complex<double>;

enum class Domain { Real, Circle };

struct Atoms {
  std::vector<double> locations;  // strictly increasing
  std::vector<double> weights;
  Domain domain = Domain::Real;
};

/// Density sampled on a strictly increasing grid and linearly interpolated.
/// Circle densities live on angles in [0, 2pi) and wrap periodically.
struct GridDensity {
  std::vector<double> grid;
  std::vector<double> values;
  Domain domain = Domain::Real;
};

enum class NamedLaw { Semicircle, Laguerre, UniformCircle };

struct Named {
  NamedLaw law;
  std::map<std::string, double> params;  // semicircle: w, beta; laguerre: a, beta
};

/// A probability measure on the line or on the unit circle. The factories
/// enforce nonnegativity, ordering and unit mass, so every instance is valid.
class SpectralMeasure {
 public:
  using Variant = std::variant<Atoms, GridDensity, Named>;

  /// Sorts by location and merges coincident atoms.
  static SpectralMeasure atoms(std::vector<double> locations, std::vector<double> weights,
                               Domain domain = Domain::Real);
  static SpectralMeasure point_mass(double location, Domain domain = Domain::Real);
  static SpectralMeasure density(std::vector<double> grid, std::vector<double> values,
                                 Domain domain = Domain::Real);
  static SpectralMeasure named(NamedLaw law, std::map<std::string, double> params = {});
  static SpectralMeasure semicircle(double w, int beta = 2);
  static SpectralMeasure laguerre(double a, int beta = 2);
  static SpectralMeasure uniform_circle();

  const Variant& variant() const { return v_; }
  Domain domain() const;

  const Atoms* as_atoms() const { return std::get_if<Atoms>(&v_); }
  const GridDensity* as_grid() const { return std::get_if<GridDensity>(&v_); }
  const Named* as_named() const { return std::get_if<Named>(&v_); }

  /// Smallest closed interval carrying the measure.
  std::pair<double, double> support() const;

 private:
  explicit SpectralMeasure(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

/// Analytic function off the real axis (or off the unit circle), with an
/// optional exact derivative. Without one, derivative() uses central differences.
class ComplexEvaluator {
 public:
  using Function = std::function<Complex(Complex)>;

  ComplexEvaluator() = default;
  explicit ComplexEvaluator(Function f, Function derivative = {}, double min_abs_imag = 0.0);

  Complex operator()(Complex z) const { return f_(z); }
  Complex derivative(Complex z) const;
  bool has_exact_derivative() const { return static_cast<bool>(df_); }
  double min_abs_imag() const { return min_abs_imag_; }

 private:
  Function f_;
  Function df_;
  double min_abs_imag_ = 0.0;
};

struct KolmogorovDistance {
  double value = 0.0;
};

struct Inversion {
  SpectralMeasure measure;
  double epsilon = 0.0;
  bool negative_warning = false;  // some raw value fell below -1e-6 before clamping
  double most_negative = 0.0;     // smallest raw value seen
  std::vector<double> raw;        // clamped (1/pi) Im f before renormalization
  double raw_mass = 0.0;          // trapezoid mass of raw
};

struct NevanlinnaReport {
  bool ok = false;
  std::vector<Complex> violations;         // points with Im f * Im z <= 0
  std::array<double, 4> tail{};            // y |f(iy)| at y = 1, 10, 100, 1000
  bool tail_ok = false;                    // y |f(iy)| within 10% of 1 at y = 1000
};

/// Normalized counting measure: weight 1/n per eigenvalue, multiplicities merged.
SpectralMeasure empirical_measure(std::span<const double> eigenvalues, Domain domain = Domain::Real);

/// m([lo, hi]).
double measure_of(const SpectralMeasure& m, double lo, double hi);
/// m((-inf, x]) on the line, m([0, x]) on the circle.
double cdf(const SpectralMeasure& m, double x);
/// Left limit of cdf at x.
double cdf_left(const SpectralMeasure& m, double x);
/// Density value for GridDensity (linear interpolation) and named laws.
double density_at(const SpectralMeasure& m, double x);

Complex stieltjes_eval(const SpectralMeasure& m, Complex z);
Complex stieltjes_derivative(const SpectralMeasure& m, Complex z);
Complex herglotz_eval(const SpectralMeasure& m, Complex z);
ComplexEvaluator stieltjes_evaluator(const SpectralMeasure& m);

/// (1/pi) Im f(x + i eps) on the grid, clamped at zero and renormalized.
Inversion invert_stieltjes(const ComplexEvaluator& f, std::span<const double> grid, double epsilon);

NevanlinnaReport nevanlinna_check(const ComplexEvaluator& f, std::span<const Complex> points);

KolmogorovDistance ks_distance(const SpectralMeasure& m1, const SpectralMeasure& m2);

/// sup over `points` of the CDF gap, checking right values and left limits.
/// For composite references (e.g. an atom plus a density) built by the caller.
using CdfFunction = std::function<double(double)>;
double sup_cdf_gap(const CdfFunction& f, const CdfFunction& f_left, const CdfFunction& g,
                   const CdfFunction& g_left, std::span<const double> points);

/// Restriction to [-T, T], renormalized.
SpectralMeasure truncate(const SpectralMeasure& m, double T);

/// lo, lo + step, ..., up to hi (inclusive within half a step).
std::vector<double> uniform_grid(double lo, double hi, double step);

double trapezoid_mass(const GridDensity& g);

}  // namespace rmt
