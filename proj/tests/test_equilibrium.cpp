#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "rmt/equilibrium.hpp"
#include "rmt/error.hpp"
#include "rmt/limit_laws.hpp"

using namespace rmt;
using doctest::Approx;

namespace {

constexpr double pi = std::numbers::pi;

PotentialPolynomial gaussian(double w) { return PotentialPolynomial({0.0, 0.0, 1.0 / (4 * w * w)}); }
PotentialPolynomial quartic() { return PotentialPolynomial({0.0, 0.0, 0.0, 0.0, 0.25}); }
PotentialPolynomial monomial(int alpha) {
  std::vector<double> c(alpha + 1, 0.0);
  c[alpha] = 1.0 / alpha;
  return PotentialPolynomial(c);
}

// pv \int rho(mu)/(mu - x) for the semicircle of variance v: -x / (2 v).
double semicircle_hilbert(double x, double v) { return -x / (2 * v); }

}  // namespace

TEST_CASE("singular quadrature") {
  auto one = [](double) { return 1.0; };
  CHECK(singular_quadrature(one, -1.0, 3.0, 8) == Approx(pi).epsilon(1e-15));
  CHECK(std::abs(singular_quadrature([](double m) { return m; }, -3.0, 3.0, 9)) < 1e-14);
  CHECK(singular_quadrature([](double m) { return m * m; }, -2.0, 2.0, 6) == Approx(2 * pi).epsilon(1e-14));
  // \int mu^4 / sqrt(4 - mu^2) = 3 pi b^4 / 8 with b = 2.
  CHECK(singular_quadrature([](double m) { return std::pow(m, 4); }, -2.0, 2.0, 6) ==
        Approx(6 * pi).epsilon(1e-14));
  CHECK_THROWS_AS(singular_quadrature(one, 1.0, 1.0, 8), InputError);
  CHECK_THROWS_AS(singular_quadrature(one, 2.0, 1.0, 8), InputError);
}

TEST_CASE("potential validation") {
  CHECK_THROWS_AS(PotentialPolynomial({0.0, 1.0}), InputError);
  CHECK_THROWS_AS(PotentialPolynomial({0.0, 0.0, -1.0}), InputError);
  CHECK_THROWS_AS(PotentialPolynomial({0.0, 0.0, 0.0, 1.0}), InputError);
  CHECK_THROWS_AS(PotentialPolynomial({}), InputError);
  PotentialPolynomial well({0.0, 0.0, -1.0, 0.0, 0.1});
  CHECK_FALSE(well.convex());
  CHECK_THROWS_AS(solve_support(well), InputError);
  PotentialPolynomial ok({0.0, 0.0, 0.25});
  CHECK(ok.convex());
  CHECK(ok.degree() == 2);
  CHECK(ok(2.0) == Approx(1.0));
  CHECK(ok.derivative(2.0) == Approx(1.0));
}

TEST_CASE("support endpoints") {
  SupportInterval g = solve_support(gaussian(1.0));
  CHECK(g.b == Approx(2 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(g.a == Approx(-2 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(g.residual_q0 <= 1e-10);
  CHECK(g.residual_q1 <= 1e-10);

  SupportInterval q = solve_support(quartic());
  double a4 = 16.0 / 3.0;
  CHECK(std::abs(std::pow(q.b, 4) - a4) <= 1e-8);
  CHECK(q.b == Approx(1.51967137130318509).epsilon(1e-12));
  CHECK(q.a == Approx(-q.b).epsilon(1e-12));

  for (double s : {-1.5, 0.3, 4.0}) {
    SupportInterval t = solve_support(PotentialPolynomial({0.0, -s, 0.5}));
    CHECK(t.a == Approx(s - 2).epsilon(1e-11));
    CHECK(t.b == Approx(s + 2).epsilon(1e-11));
  }
}

TEST_CASE("equilibrium density values") {
  auto V = gaussian(1.0);
  auto s = solve_support(V);
  CHECK(equilibrium_density(V, s, 0.0) == Approx(0.225079079039276517).epsilon(1e-12));
  CHECK(equilibrium_density(V, s, s.b) == 0.0);
  CHECK(equilibrium_density(V, s, s.b + 1) == 0.0);

  auto Q = quartic();
  auto sq = solve_support(Q);
  double a = 1.51967137130318509;
  CHECK(equilibrium_density(Q, sq, 0.0) == Approx(a * a * a / (4 * pi)).epsilon(1e-11));
  auto P = equilibrium_polynomial(Q, sq);
  REQUIRE(P.size() == 3);
  CHECK(P[0] == Approx(a * a / (4 * pi)).epsilon(1e-11));
  CHECK(std::abs(P[1]) < 1e-12);
  CHECK(P[2] == Approx(1 / (2 * pi)).epsilon(1e-11));
}

TEST_CASE("gaussian reduction to the semicircle") {
  for (double w : {0.5, 1.0, 2.0}) {
    auto V = gaussian(w);
    auto s = solve_support(V);
    double worst = 0.0;
    for (int i = 0; i <= 1000; ++i) {
      double x = s.a + (s.b - s.a) * i / 1000.0;
      worst = std::max(worst, std::abs(equilibrium_density(V, s, x) - oracle::semicircle_rho(x, w, 2)));
    }
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("mass and positivity") {
  std::vector<PotentialPolynomial> pots = {gaussian(1.0), quartic(), monomial(6),
                                           PotentialPolynomial({0.0, 0.3, 0.5, 0.1, 0.2}),
                                           PotentialPolynomial({1.0, -0.5, 0.2, 0.0, 0.05, 0.0, 0.02})};
  for (const auto& V : pots) {
    auto s = solve_support(V);
    CHECK(std::abs(equilibrium_mass(V, s) - 1.0) <= 1e-8);
    // Independent check: Simpson after mu = c + r sin(t).
    double c = 0.5 * (s.a + s.b), r = 0.5 * (s.b - s.a);
    double m = oracle::simpson([&](double t) { return equilibrium_density(V, s, c + r * std::sin(t)) * r * std::cos(t); },
                               -pi / 2, pi / 2, 2000);
    CHECK(m == Approx(1.0).epsilon(1e-9));
    auto P = equilibrium_polynomial(V, s);
    double minP = 1e300;
    for (int i = 0; i <= 1000; ++i) {
      double x = s.a + (s.b - s.a) * i / 1000.0;
      double p = 0.0;
      for (std::size_t k = P.size(); k-- > 0;) p = p * x + P[k];
      minP = std::min(minP, p);
    }
    CHECK(minP > 0.0);
  }
}

TEST_CASE("monomial laws") {
  CHECK(monomial_integral(2) == Approx(pi / 4).epsilon(1e-13));
  CHECK(monomial_integral(1) == Approx(1.0).epsilon(1e-13));
  CHECK(monomial_integral(4) == Approx(3 * pi / 16).epsilon(1e-13));
  CHECK(monomial_support(2) == Approx(2.0).epsilon(1e-12));
  CHECK(monomial_density(2, 0.0) == Approx(1 / pi).epsilon(1e-10));
  CHECK(std::abs(std::pow(monomial_support(4), 4) - 16.0 / 3.0) <= 1e-12);
  CHECK(monomial_density(4, monomial_support(4)) == 0.0);
  for (double alpha : {2.0, 3.0, 4.5, 7.0}) {
    double a = monomial_support(alpha);
    CHECK(std::abs(std::pow(a, alpha) - pi / monomial_integral(alpha)) <= 1e-12 * std::pow(a, alpha));
  }
  CHECK_THROWS_AS(monomial_support(1.5), InputError);
  CHECK_THROWS_AS(monomial_density(1.0, 0.0), InputError);

  for (int alpha : {2, 4, 6}) {
    auto V = monomial(alpha);
    auto s = solve_support(V);
    CHECK(s.b == Approx(monomial_support(alpha)).epsilon(1e-11));
    double worst = 0.0;
    for (int i = 0; i <= 200; ++i) {
      double x = s.a + (s.b - s.a) * i / 200.0;
      worst = std::max(worst, std::abs(monomial_density(alpha, x) - equilibrium_density(V, s, x)));
    }
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("singular equation") {
  auto V = gaussian(1.0);
  auto s = solve_support(V);
  auto rep = verify_singular_equation(V, s, [&](double x) { return equilibrium_density(V, s, x); });
  CHECK(rep.points.size() == 50);
  CHECK(rep.max_deviation <= 1e-6);
  for (double x : rep.points) {
    CHECK(x > s.a);
    CHECK(x < s.b);
    CHECK(semicircle_hilbert(x, 2.0) == Approx(-V.derivative(x) / 2).epsilon(1e-14));
  }

  auto Q = quartic();
  auto sq = solve_support(Q);
  auto rq = verify_singular_equation(Q, sq, [&](double x) { return equilibrium_density(Q, sq, x); });
  CHECK(rq.max_deviation <= 1e-4);

  auto grid = equilibrium_measure(Q, sq, 4001);
  auto rg = verify_singular_equation(Q, sq, *grid.as_grid());
  CHECK(rg.max_deviation <= 1e-4);

  // A wrong density is detected.
  auto bad = verify_singular_equation(Q, sq, [&](double x) { return 1.1 * equilibrium_density(Q, sq, x); });
  CHECK(bad.max_deviation > 1e-2);
}
