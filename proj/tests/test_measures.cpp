#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "rmt/ensembles.hpp"
#include "rmt/error.hpp"
#include "rmt/limit_laws.hpp"
#include "rmt/measures.hpp"

using namespace rmt;
using doctest::Approx;

namespace {

SpectralMeasure semicircle_grid(double w, double step) {
  double r = 2.0 * std::sqrt(2.0) * w;
  std::vector<double> x, y;
  int k = static_cast<int>(std::round(2.0 * r / step));
  for (int i = 0; i <= k; ++i) {
    double t = -r + 2.0 * r * i / k;
    x.push_back(t);
    y.push_back(oracle::semicircle_rho(t, w, 2));
  }
  double mass = trapezoid_mass(GridDensity{x, y, Domain::Real});
  for (double& v : y) v /= mass;
  return SpectralMeasure::density(x, y);
}

// Smooth bump (1 - x^2/9)^4 on [-3, 3] shifted by c, normalized on its own grid.
SpectralMeasure bump(double c, double step = 1e-3) {
  std::vector<double> x, y;
  for (double t : uniform_grid(-3.0, 3.0, step)) {
    x.push_back(t + c);
    y.push_back(std::pow(1.0 - t * t / 9.0, 4));
  }
  double mass = trapezoid_mass(GridDensity{x, y, Domain::Real});
  for (double& v : y) v /= mass;
  return SpectralMeasure::density(x, y);
}

}  // namespace

TEST_CASE("empirical measure counts eigenvalues") {
  std::vector<double> e = {1, 2, 3};
  auto m = empirical_measure(e);
  CHECK(measure_of(m, 1.5, 3.0) == Approx(2.0 / 3.0).epsilon(1e-15));

  std::vector<double> z = {0, 0, 0};
  auto m0 = empirical_measure(z);
  REQUIRE(m0.as_atoms());
  CHECK(m0.as_atoms()->locations.size() == 1);
  CHECK(m0.as_atoms()->weights[0] == Approx(1.0).epsilon(1e-15));

  std::vector<double> none;
  CHECK_THROWS_WITH_AS(empirical_measure(none), "empty spectrum", InputError);

  auto eig = eigenvalues(sample_gue(4, 1.0, 11));
  auto m4 = empirical_measure(eig);
  REQUIRE(m4.as_atoms());
  CHECK(m4.as_atoms()->weights.size() == 4);
  for (double w : m4.as_atoms()->weights) CHECK(w == Approx(0.25).epsilon(1e-15));
}

TEST_CASE("factories enforce the measure invariants") {
  CHECK_THROWS_AS(SpectralMeasure::atoms({0.0, 1.0}, {0.5, 0.4}), InputError);
  CHECK_THROWS_AS(SpectralMeasure::atoms({0.0, 1.0}, {1.5, -0.5}), InputError);
  CHECK_THROWS_AS(SpectralMeasure::density({0.0, 1.0, 0.5}, {1.0, 1.0, 1.0}), InputError);
  CHECK_THROWS_AS(SpectralMeasure::density({0.0, 1.0}, {2.0, 2.0}), InputError);
  CHECK_THROWS_AS(SpectralMeasure::density({0.0, 1.0}, {-1.0, 3.0}), InputError);
  auto merged = SpectralMeasure::atoms({1.0, 0.0, 1.0}, {0.25, 0.5, 0.25});
  REQUIRE(merged.as_atoms());
  CHECK(merged.as_atoms()->locations == std::vector<double>{0.0, 1.0});
  CHECK(merged.as_atoms()->weights[1] == Approx(0.5));
}

TEST_CASE("stieltjes transform of atoms and densities") {
  auto delta = SpectralMeasure::point_mass(0.0);
  Complex f = stieltjes_eval(delta, Complex(0, 1));
  CHECK(std::abs(f - Complex(0, 1)) < 1e-15);
  CHECK_THROWS_WITH_AS(stieltjes_eval(delta, Complex(0.3, 0.0)), "real spectral parameter", InputError);

  auto sc = semicircle_grid(1.0, 1e-3);
  CHECK(std::abs(stieltjes_eval(sc, Complex(0, 1)) - Complex(0, 0.5)) < 1e-5);

  // Piecewise-linear integration against a Simpson oracle on the same interpolant.
  auto g = bump(0.4, 0.05);
  const auto& gd = *g.as_grid();
  auto interp = [&](double x) { return density_at(g, x); };
  for (Complex z : {Complex(0.1, 0.5), Complex(-2.0, 0.3), Complex(5.0, -1.0)}) {
    Complex ref = 0.0;
    for (std::size_t k = 1; k < gd.grid.size(); ++k)
      ref += oracle::simpson_c([&](double x) { return interp(x) / (x - z); }, gd.grid[k - 1], gd.grid[k], 64);
    CHECK(std::abs(stieltjes_eval(g, z) - ref) < 1e-9);
  }
}

TEST_CASE("stieltjes normalization at large imaginary part") {
  Complex z(0.0, 1e6);
  std::vector<SpectralMeasure> ms = {SpectralMeasure::atoms({-1.0, 2.0}, {0.3, 0.7}), semicircle_grid(1.0, 1e-2),
                                     SpectralMeasure::semicircle(1.0), SpectralMeasure::laguerre(0.7)};
  for (const auto& m : ms) CHECK(std::abs(stieltjes_eval(m, z) * (-z) - 1.0) < 1e-5);
}

TEST_CASE("herglotz transform on the circle") {
  auto unif = SpectralMeasure::uniform_circle();
  auto atom = SpectralMeasure::point_mass(0.0, Domain::Circle);
  CHECK(std::abs(herglotz_eval(atom, 0.0) - 1.0) < 1e-15);
  CHECK(std::abs(herglotz_eval(unif, 0.2) - 1.0) < 1e-12);
  CHECK(std::abs(herglotz_eval(atom, 0.5) - 3.0) < 1e-14);
  CHECK_THROWS_WITH_AS(herglotz_eval(unif, Complex(0.6, 0.8)), "on unit circle", InputError);
  CHECK_THROWS_AS(herglotz_eval(SpectralMeasure::point_mass(0.0), 0.5), InputError);
  CHECK_THROWS_AS(stieltjes_eval(unif, Complex(0, 1)), InputError);

  // Property: uniform law gives 1 inside the disc, also as a gridded density.
  std::vector<double> th, v;
  for (int k = 0; k < 512; ++k) {
    th.push_back(2.0 * M_PI * k / 512);
    v.push_back(1.0 / (2.0 * M_PI));
  }
  auto ug = SpectralMeasure::density(th, v, Domain::Circle);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> r(0.0, 0.9), a(0.0, 2.0 * M_PI);
  for (int i = 0; i < 50; ++i) {
    Complex z = std::polar(r(rng), a(rng));
    CHECK(std::abs(herglotz_eval(unif, z) - 1.0) < 1e-10);
    CHECK(std::abs(herglotz_eval(ug, z) - 1.0) < 1e-10);
  }
}

TEST_CASE("inversion of transforms") {
  // Point mass: Lorentzian of width eps at 0.
  const double eps = 1e-3;
  auto grid = uniform_grid(-1.0, 1.0, eps / 10.0);
  Inversion inv = invert_stieltjes(point_mass_transform(), grid, eps);
  const auto& g = *inv.measure.as_grid();
  auto peak = std::max_element(g.values.begin(), g.values.end()) - g.values.begin();
  CHECK(std::abs(g.grid[static_cast<std::size_t>(peak)]) < 1e-12);
  CHECK(density_at(inv.measure, eps) == Approx(0.5 * g.values[static_cast<std::size_t>(peak)]).epsilon(1e-3));
  CHECK(inv.epsilon == eps);

  // Closed-form semicircle transform against the density.
  ComplexEvaluator fsc([](Complex z) { return semicircle_stieltjes(z, 1.0); });
  auto g2 = uniform_grid(-3.0, 3.0, 1e-3);
  Inversion sc = invert_stieltjes(fsc, g2, 1e-4);
  double worst = 0.0;
  for (double x : g2) worst = std::max(worst, std::abs(density_at(sc.measure, x) - oracle::semicircle_rho(x, 1.0, 2)));
  CHECK(worst < 5e-3);
  CHECK_FALSE(sc.negative_warning);

  CHECK_THROWS_AS(invert_stieltjes(fsc, g2, 0.0), InputError);
  ComplexEvaluator bad([](Complex z) { return -1.0 / z + 0.2 / (z - 0.5); });
  Inversion neg = invert_stieltjes(bad, uniform_grid(-1.0, 1.0, 0.01), 0.1);
  CHECK(neg.negative_warning);
  CHECK(neg.most_negative < -1e-6);
  for (double v : neg.measure.as_grid()->values) CHECK(v >= 0.0);
  ComplexEvaluator empty([](Complex z) { return 1.0 / z; });
  CHECK_THROWS_AS(invert_stieltjes(empty, uniform_grid(-1.0, 1.0, 0.01), 0.1), NumericalError);
}

TEST_CASE("inversion round trip on smooth densities") {
  auto m = bump(0.5, 2e-3);
  ComplexEvaluator f([&](Complex z) { return stieltjes_eval(m, z); });
  Inversion inv = invert_stieltjes(f, uniform_grid(-10.0, 10.0, 2e-3), 1e-4);
  CHECK(ks_distance(inv.measure, m).value <= 0.01);
}

TEST_CASE("nevanlinna check") {
  std::vector<Complex> pts = {Complex(0, 1), Complex(0, 2), Complex(1, 1), Complex(-1, -1)};
  CHECK(nevanlinna_check(point_mass_transform(), pts).ok);
  ComplexEvaluator wrong([](Complex z) { return 1.0 / z; });
  auto r = nevanlinna_check(wrong, pts);
  CHECK_FALSE(r.ok);
  CHECK(r.violations.size() == pts.size());
  ComplexEvaluator fsc([](Complex z) { return semicircle_stieltjes(z, 1.0); });
  auto rs = nevanlinna_check(fsc, pts);
  CHECK(rs.ok);
  CHECK(rs.tail_ok);
  CHECK(rs.tail[3] == Approx(1.0).epsilon(1e-5));
}

TEST_CASE("every measure kind is Nevanlinna") {
  std::vector<SpectralMeasure> ms = {SpectralMeasure::atoms({-1.0, 0.5, 2.0}, {0.2, 0.3, 0.5}), bump(0.0, 0.01),
                                     SpectralMeasure::semicircle(0.7, 1), SpectralMeasure::laguerre(1.1)};
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (const auto& m : ms)
    for (int i = 0; i < 100; ++i) {
      Complex z(u(rng), u(rng));
      if (z.imag() == 0.0) continue;
      CHECK(stieltjes_eval(m, z).imag() * z.imag() > 0.0);
    }
}

TEST_CASE("kolmogorov distance") {
  auto a = SpectralMeasure::point_mass(0.0), b = SpectralMeasure::point_mass(1.0);
  CHECK(ks_distance(a, a).value == 0.0);
  CHECK(ks_distance(a, b).value == Approx(1.0));
  CHECK_THROWS_AS(ks_distance(a, SpectralMeasure::uniform_circle()), InputError);

  auto eig = eigenvalues(sample_gue(1024, 1.0, 3));
  double ks = ks_distance(empirical_measure(eig), SpectralMeasure::semicircle(1.0)).value;
  CHECK(ks <= 0.03);
  CHECK(ks == Approx(oracle::ks_samples(eig, [](double x) { return oracle::semicircle_cdf(x, 1.0, 2); })).epsilon(1e-9));

  // Pseudometric on random triples.
  std::mt19937_64 rng(23);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<SpectralMeasure> m;
    for (int j = 0; j < 2; ++j) {
      std::vector<double> x(7);
      for (double& v : x) v = nd(rng);
      m.push_back(empirical_measure(x));
    }
    m.push_back(bump(nd(rng), 0.01));
    double ab = ks_distance(m[0], m[1]).value, ba = ks_distance(m[1], m[0]).value;
    double ac = ks_distance(m[0], m[2]).value, cb = ks_distance(m[2], m[1]).value;
    CHECK(std::abs(ab - ba) <= 1e-12);
    CHECK(ab <= ac + cb + 1e-12);
    CHECK(ac >= 0.0);
    CHECK(ac <= 1.0);
  }
}

TEST_CASE("truncation renormalizes") {
  auto m = SpectralMeasure::atoms({-5.0, 0.0, 1.0, 9.0}, {0.1, 0.4, 0.4, 0.1});
  auto t = truncate(m, 2.0);
  REQUIRE(t.as_atoms());
  CHECK(t.as_atoms()->locations == std::vector<double>{0.0, 1.0});
  CHECK(t.as_atoms()->weights[0] == Approx(0.5));
}
