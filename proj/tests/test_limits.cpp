#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "ballfields/limits.hpp"

using namespace ballfields;

namespace {

Measure two_box_difference() {
  return Measure::combination(
      {{1.0, Measure::uniform_box(make_box1(0.0, 1.0), 1.0)},
       {-1.0, Measure::uniform_box(make_box1(1.0, 2.0), 1.0)}});
}

}  // namespace

TEST_CASE("takenaka scale closed form") {
  // In d = 1 at beta = 1/2 the control integral is iint 2 min(z, 2r) r^{-3/2},
  // which evaluates to 8 sqrt(2) sqrt(z).
  const double alpha = 1.5, beta = 0.5, c_beta = 0.7, sigma = 1.3;
  for (double z : {1.0, 4.0}) {
    const StableParams p =
        z_alpha_params(Measure::takenaka(1, make_point(z)), alpha, beta, c_beta, sigma, 0.0);
    const double ref = std::pow(sigma, alpha) * c_beta * 8.0 * std::sqrt(2.0 * z);
    CHECK(std::pow(p.scale, alpha) == doctest::Approx(ref).epsilon(1e-6));
    CHECK(p.skew == 0.0);
    CHECK(p.shift == 0.0);
  }
}

TEST_CASE("z_alpha parameters transform with the group") {
  const Measure mu = two_box_difference();
  const double alpha = 1.8, beta = 1.5, c_beta = 1.5, sigma = 1.0, b = 0.4;
  const StableParams base = z_alpha_params(mu, alpha, beta, c_beta, sigma, b);
  CHECK(base.scale > 0.0);
  // Signed symmetric measure: the geometry carries no asymmetry.
  CHECK(base.skew == doctest::Approx(0.0).scale(1.0).epsilon(1e-8));

  SUBCASE("self-similarity under dilation") {
    for (double a : {0.5, 2.0}) {
      const StableParams dil = z_alpha_params(mu.dilated(a), alpha, beta, c_beta, sigma, b);
      CHECK(dil.scale / base.scale ==
            doctest::Approx(std::pow(a, (1.0 - beta) / alpha)).epsilon(1e-5));
    }
  }
  SUBCASE("translation and reflection invariance") {
    const StableParams tr =
        z_alpha_params(mu.translated(make_point(5.0)), alpha, beta, c_beta, sigma, b);
    CHECK(tr.scale == doctest::Approx(base.scale).epsilon(1e-6));
    const StableParams rf =
        z_alpha_params(mu.rotated(Rotation::reflection()), alpha, beta, c_beta, sigma, b);
    CHECK(rf.scale == doctest::Approx(base.scale).epsilon(1e-6));
  }
  SUBCASE("skew follows a sign-asymmetric geometry") {
    const Measure pos = Measure::uniform_box(make_box1(0.0, 1.0), 1.0);
    const StableParams p = z_alpha_params(pos, alpha, beta, c_beta, sigma, b);
    CHECK(p.skew == doctest::Approx(b).epsilon(1e-6));  // all ball masses >= 0
    const StableParams m = z_alpha_params(pos.scaled(-1.0), alpha, beta, c_beta, sigma, b);
    CHECK(m.skew == doctest::Approx(-b).epsilon(1e-6));
  }
}

TEST_CASE("compensated-poisson exponent is aggregate-similar") {
  // J(mu_{a_m}) =d sum of m copies of J(mu): the exponent of mu dilated by
  // a_m = m^{1/(d-beta)} is m times the exponent of mu.
  const Measure mu = two_box_difference();
  const WeightLaw g = WeightLaw::two_sided_pareto(1.5, 1.0, 0.6);
  const double beta = 0.5, c_beta = 1.0;
  for (double m : {2.0, 5.0}) {
    const double am = std::pow(m, 1.0 / (1.0 - beta));
    for (double theta : {0.4, 1.1}) {
      const auto lhs = j_exponent(mu.dilated(am), 1.0, g, beta, c_beta, theta);
      const auto rhs = j_exponent(mu, 1.0, g, beta, c_beta, theta);
      CHECK(std::abs(lhs - m * rhs) < 1e-4 * std::abs(m * rhs));
    }
  }
}

TEST_CASE("j cf basics") {
  const Measure mu = two_box_difference();
  const WeightLaw g = WeightLaw::two_sided_pareto(1.5, 1.0, 0.6);
  const std::vector<double> theta = {-1.0, -0.3, 0.0, 0.3, 1.0};
  const CFCurve c = j_cf(mu, 2.0, g, 0.5, 1.0, theta);
  REQUIRE(c.value.size() == 5);
  CHECK(std::abs(c.value[2] - 1.0) < 1e-12);
  CHECK(std::abs(c.value[0] - std::conj(c.value[4])) < 1e-6);
  for (const auto& v : c.value) CHECK(std::abs(v) <= 1.0 + 1e-9);
  CHECK(c.method == "quadrature");
}

TEST_CASE("bridge distances decay toward the stable limit") {
  const Measure mu = two_box_difference();
  const WeightLaw g = WeightLaw::two_sided_pareto(1.5, 1.0, 0.5);
  const StableParams zp = z_alpha_params(mu, 1.5, 0.5, 1.0, g.attracting().scale, 0.0);
  const auto theta = select_theta_grid(
      [&](double t) { return std::abs(stable_cf_value(zp, t)); }, 9);
  const auto dist = zj_bridge(mu, g, 0.5, 1.0, {10.0, 100.0}, theta);
  REQUIRE(dist.size() == 2);
  CHECK(dist[1] < dist[0]);
}

TEST_CASE("gamma-regime marginal parameters") {
  SUBCASE("mark skew constant has Pareto closed form") {
    CHECK(gamma_mark_skew(WeightLaw::two_sided_pareto(1.8, 1.0, 0.7), 1.5) ==
          doctest::Approx(0.4).epsilon(1e-10));
    CHECK(gamma_mark_skew(WeightLaw::exact_stable(1.8, 1.0, 0.0, 0.0), 1.5) ==
          doctest::Approx(0.0).scale(1.0).epsilon(1e-6));
  }
  SUBCASE("scale is 1-homogeneous and skew is odd in the density") {
    const Measure mu = Measure::uniform_box(make_box1(0.0, 1.0), 1.0);
    const WeightLaw g = WeightLaw::two_sided_pareto(1.8, 1.0, 0.7);
    const StableParams p = z_tilde_gamma_params(mu, 1.5, 1.8, 1.0, g);
    CHECK(p.index == doctest::Approx(1.5));  // gamma = beta / d
    const StableParams p2 = z_tilde_gamma_params(mu.scaled(2.0), 1.5, 1.8, 1.0, g);
    CHECK(p2.scale == doctest::Approx(2.0 * p.scale).epsilon(1e-8));
    const StableParams pm = z_tilde_gamma_params(mu.scaled(-1.0), 1.5, 1.8, 1.0, g);
    CHECK(pm.skew == doctest::Approx(-p.skew).epsilon(1e-8));
    CHECK(p.skew > 0.0);
  }
  SUBCASE("beta outside (d, alpha d) is rejected") {
    const Measure mu = Measure::uniform_box(make_box1(0.0, 1.0), 1.0);
    const WeightLaw g = WeightLaw::two_sided_pareto(1.8, 1.0, 0.7);
    CHECK_THROWS_AS(z_tilde_gamma_params(mu, 0.9, 1.8, 1.0, g), std::invalid_argument);
    CHECK_THROWS_AS(z_tilde_gamma_params(mu, 2.0, 1.8, 1.0, g), std::invalid_argument);
  }
}

TEST_CASE("alpha-regime marginal closed form") {
  const Measure mu = Measure::uniform_box(make_box1(0.0, 1.0), 2.0);
  const RadiusLaw f = RadiusLaw::pareto_tail(4.0, 1.0);
  const WeightLaw g = WeightLaw::exact_stable(1.5, 1.0, 0.3, 0.0);
  const StableParams p = z_tilde_alpha_params(mu, f, g);
  // scale = sigma c_d (int r^{ad} F int phi^a)^{1/a} with int r^{1.5} F = 1.6.
  const double ref = 1.0 * 2.0 * std::pow(1.6 * std::pow(2.0, 1.5), 1.0 / 1.5);
  CHECK(p.scale == doctest::Approx(ref).epsilon(1e-9));
  CHECK(p.skew == doctest::Approx(0.3).epsilon(1e-9));
  CHECK_THROWS_AS(z_tilde_alpha_params(mu, RadiusLaw::pareto_tail(1.2, 1.0), g),
                  std::invalid_argument);
}

TEST_CASE("covariation") {
  const double alpha = 1.8, beta = 1.5, c_beta = 1.5, sigma = 1.1;
  const Measure left = Measure::uniform_box(make_box1(0.0, 1.0), 1.0);
  const Measure right = Measure::uniform_box(make_box1(1.0, 2.0), 1.0);
  SUBCASE("self-covariation is scale^alpha") {
    const StableParams p = z_alpha_params(left, alpha, beta, c_beta, sigma, 0.0);
    CHECK(covariation(left, left, alpha, beta, c_beta, sigma) ==
          doctest::Approx(std::pow(p.scale, alpha)).epsilon(1e-5));
  }
  SUBCASE("linearity in the first argument") {
    const double v = covariation(left, right, alpha, beta, c_beta, sigma);
    CHECK(covariation(left.scaled(3.0), right, alpha, beta, c_beta, sigma) ==
          doctest::Approx(3.0 * v).epsilon(1e-6));
  }
  SUBCASE("disjoint supports still carry dependence") {
    CHECK(covariation(left, right, alpha, beta, c_beta, sigma) > 0.0);
  }
}

TEST_CASE("stable cf curve and sampling") {
  const StableParams p{1.5, 2.0, 0.4, 0.0};
  const std::vector<double> theta = {-1.0, 0.0, 0.5};
  const CFCurve c = stable_cf(p, theta);
  CHECK(c.method == "closed-form");
  for (std::size_t i = 0; i < theta.size(); ++i)
    CHECK(std::abs(c.value[i] - stable_cf_value(p, theta[i])) < 1e-15);
  RngStream r1(5, 1), r2(5, 1);
  CHECK(sample_limit(p, r1) == sample_limit(p, r2));
}

TEST_CASE("theta grid selection") {
  const auto grid = select_theta_grid(
      [](double t) { return std::exp(-t * t); }, 21);
  REQUIRE(grid.size() == 21);
  CHECK(grid[10] == 0.0);
  CHECK(grid.back() == doctest::Approx(std::sqrt(std::log(5.0))).epsilon(1e-3));
  CHECK(grid.front() == doctest::Approx(-grid.back()));
  // Uniform spacing.
  CHECK(grid[11] - grid[10] == doctest::Approx(grid.back() / 10.0).epsilon(1e-9));
}

TEST_CASE("density power integrals") {
  const auto [pa, ps] =
      density_power_integrals(Measure::uniform_box(make_box1(0.0, 1.0), 2.0), 1.5);
  CHECK(pa == doctest::Approx(std::pow(2.0, 1.5)).epsilon(1e-8));
  CHECK(ps == doctest::Approx(std::pow(2.0, 1.5)).epsilon(1e-8));
  const auto [da, ds] = density_power_integrals(two_box_difference(), 1.5);
  CHECK(da == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(ds == doctest::Approx(0.0).scale(1.0).epsilon(1e-8));
  Box sq;
  sq.dim = 2;
  sq.lo = make_point(0.0, 0.0);
  sq.hi = make_point(2.0, 1.0);
  const auto [qa, qs] = density_power_integrals(Measure::uniform_box(sq, 3.0), 1.5);
  CHECK(qa == doctest::Approx(2.0 * std::pow(3.0, 1.5)).epsilon(1e-6));
  CHECK(qs == doctest::Approx(qa).epsilon(1e-8));
}
