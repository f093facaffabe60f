#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "ballfields/laws.hpp"
#include "ballfields/measures.hpp"
#include "ballfields/stats.hpp"

using namespace ballfields;

namespace {

// Closed-form fractional moments of a stable law with cf
// exp(-|t|^a (1 - i b eps(t) tan(pi a/2))): with w = q/a and c = b tan(pi a/2),
//   E|X|^q            = Gamma(1-w) Re[(1-ic)^w] / (a w I_q),
//   E[eps(X)|X|^q]    = Gamma(1-w) Im[(1-ic)^w] / (a w S_q).
std::complex<double> one_minus_ic_pow(double c, double w) {
  return std::pow(std::complex<double>(1.0, -c), w);
}

double stable_abs_moment_ref(double alpha, double b, double q) {
  const double w = q / alpha;
  const double c = b * std::tan(0.5 * M_PI * alpha);
  return std::tgamma(1.0 - w) * one_minus_ic_pow(c, w).real() / (alpha * w * i_const(q));
}

double stable_signed_moment_ref(double alpha, double b, double q) {
  const double w = q / alpha;
  const double c = b * std::tan(0.5 * M_PI * alpha);
  return std::tgamma(1.0 - w) * one_minus_ic_pow(c, w).imag() / (alpha * w * s_const(q));
}

}  // namespace

TEST_CASE("tail integral constants") {
  // I_q = Gamma(2-q)|cos(pi q/2)| / (q|q-1|); value at q = 1.5 frozen once.
  CHECK(i_const(1.5) == doctest::Approx(1.6710855164207).epsilon(1e-12));
  CHECK(i_const(1.0) == doctest::Approx(0.5 * M_PI));
  CHECK(s_const(1.5) == doctest::Approx(i_const(1.5)).epsilon(1e-12));  // |tan(3pi/4)| = 1
  CHECK_THROWS_AS(i_const(2.0), std::invalid_argument);
  CHECK_THROWS_AS(s_const(1.0), std::invalid_argument);
}

TEST_CASE("stable cf convention") {
  const StableParams p{1.5, 2.0, 0.5, 0.3};
  const auto v = stable_cf_value(p, 1.2);
  const double mod = std::pow(2.0 * 1.2, 1.5);
  const std::complex<double> ref =
      std::exp(std::complex<double>(-mod, mod * 0.5 * std::tan(0.75 * M_PI) + 0.3 * 1.2));
  CHECK(std::abs(v - ref) < 1e-14);
  // Hermitian symmetry and the Gaussian endpoint.
  CHECK(std::abs(stable_cf_value(p, -1.2) - std::conj(v)) < 1e-14);
  const StableParams g2{2.0, 1.5, 0.0, 0.0};
  CHECK(stable_cf_value(g2, 0.7).real() ==
        doctest::Approx(std::exp(-std::pow(1.5 * 0.7, 2.0))));
}

TEST_CASE("stable sampler matches the cf") {
  const StableParams p{1.5, 1.0, 0.5, 0.3};
  RngStream rng(101, 0);
  std::vector<double> samples(200000);
  for (auto& s : samples) s = sample_stable(p, rng);
  const std::vector<double> theta = {-1.5, -0.7, -0.2, 0.2, 0.7, 1.5};
  const EmpiricalCF e = empirical_cf(samples, theta);
  std::vector<std::complex<double>> ref;
  for (double t : theta) ref.push_back(stable_cf_value(p, t));
  CHECK(cf_distance(e, theta, ref).distance < e.radius);
}

TEST_CASE("stable sampler at alpha = 2 is gaussian with variance 2 scale^2") {
  const StableParams p{2.0, 1.3, 0.0, -0.4};
  RngStream rng(102, 0);
  std::vector<double> samples(200000);
  for (auto& s : samples) s = sample_stable(p, rng);
  CHECK(mean(samples) == doctest::Approx(-0.4).epsilon(0.05));
  CHECK(variance(samples) == doctest::Approx(2.0 * 1.3 * 1.3).epsilon(0.02));
}

TEST_CASE("attracting parameters") {
  SUBCASE("point mass and gaussian carry 2 scale^2 = E[m^2]") {
    const WeightLaw pm = WeightLaw::point_mass(-3.0);
    CHECK(pm.alpha() == 2.0);
    CHECK(2.0 * pm.attracting().scale * pm.attracting().scale == doctest::Approx(9.0));
    const WeightLaw ga = WeightLaw::gaussian(1.0, 4.0);
    CHECK(2.0 * ga.attracting().scale * ga.attracting().scale == doctest::Approx(5.0));
    CHECK(ga.attracting().skew == 0.0);
  }
  SUBCASE("exact stable passes through, centered") {
    const WeightLaw g = WeightLaw::exact_stable(1.7, 2.0, -0.3, 5.0);
    CHECK(g.mean() == doctest::Approx(5.0));
    CHECK(g.attracting().index == doctest::Approx(1.7));
    CHECK(g.attracting().scale == doctest::Approx(2.0));
    CHECK(g.attracting().skew == doctest::Approx(-0.3));
    CHECK(g.attracting().shift == 0.0);
  }
  SUBCASE("two-sided pareto tail balance") {
    const double alpha = 1.5, s = 2.0, p = 0.7;
    const WeightLaw g = WeightLaw::two_sided_pareto(alpha, s, p);
    CHECK(g.mean() == doctest::Approx((2.0 * p - 1.0) * alpha * s / (alpha - 1.0)));
    CHECK(g.attracting().skew == doctest::Approx(2.0 * p - 1.0));
    // sigma^alpha = alpha s^alpha I_alpha from the tail masses.
    CHECK(std::pow(g.attracting().scale, alpha) ==
          doctest::Approx(alpha * std::pow(s, alpha) * i_const(alpha)).epsilon(1e-12));
  }
}

TEST_CASE("weight cf, psi, and sampler agree") {
  const WeightLaw g = WeightLaw::two_sided_pareto(1.5, 1.0, 0.7);
  RngStream rng(103, 0);
  std::vector<double> samples(400000);
  for (auto& s : samples) s = g.sample(rng);
  const std::vector<double> theta = {-2.0, -0.8, -0.3, 0.3, 0.8, 2.0};
  const EmpiricalCF e = empirical_cf(samples, theta);
  std::vector<std::complex<double>> ref;
  for (double t : theta) ref.push_back(g.cf(t));
  CHECK(cf_distance(e, theta, ref).distance < e.radius);
  // psi ties cf, mean, and the compensator together.
  for (double t : theta)
    CHECK(std::abs(g.cf(t) - (1.0 + std::complex<double>(0.0, t * g.mean()) + g.psi(t))) <
          1e-12);
  CHECK(std::abs(g.psi(-0.8) - std::conj(g.psi(0.8))) < 1e-10);
  CHECK(std::abs(g.psi(0.0)) == 0.0);
}

TEST_CASE("psi matches its small-theta stable equivalent") {
  SUBCASE("two-sided pareto") {
    const WeightLaw g = WeightLaw::two_sided_pareto(1.3, 1.0, 0.6);
    const double u = 1e-3;
    const auto ratio = g.psi(u) / small_theta_equivalent(g, u);
    CHECK(ratio.real() == doctest::Approx(1.0).epsilon(0.05));
    CHECK(std::abs(ratio.imag()) < 0.05);
  }
  SUBCASE("exact stable") {
    const WeightLaw g = WeightLaw::exact_stable(1.6, 1.0, 0.4, 0.0);
    const double u = 1e-2;
    const auto ratio = g.psi(u) / small_theta_equivalent(g, u);
    CHECK(ratio.real() == doctest::Approx(1.0).epsilon(1e-3));
  }
  SUBCASE("mean-zero gaussian") {
    const WeightLaw g = WeightLaw::gaussian(0.0, 3.0);
    const double u = 1e-3;
    const auto ratio = g.psi(u) / small_theta_equivalent(g, u);
    CHECK(ratio.real() == doctest::Approx(1.0).epsilon(1e-5));
  }
}

TEST_CASE("absolute and signed fractional moments") {
  SUBCASE("point mass") {
    const WeightLaw g = WeightLaw::point_mass(-2.0);
    CHECK(g.abs_mean() == doctest::Approx(2.0));
    CHECK(g.abs_moment(1.5) == doctest::Approx(std::pow(2.0, 1.5)));
    CHECK(g.signed_abs_moment(1.5) == doctest::Approx(-std::pow(2.0, 1.5)));
  }
  SUBCASE("standard gaussian") {
    const WeightLaw g = WeightLaw::gaussian(0.0, 1.0);
    CHECK(g.abs_mean() == doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(1e-8));
    // E|Z|^q = 2^{q/2} Gamma((1+q)/2) / sqrt(pi).
    const double ref = std::pow(2.0, 0.75) * std::tgamma(1.25) / std::sqrt(M_PI);
    CHECK(g.abs_moment(1.5) == doctest::Approx(ref).epsilon(1e-8));
    CHECK(g.signed_abs_moment(1.5) == doctest::Approx(0.0).scale(1.0).epsilon(1e-8));
  }
  SUBCASE("exact stable vs the closed form") {
    const WeightLaw sym = WeightLaw::exact_stable(1.5, 1.0, 0.0, 0.0);
    CHECK(sym.abs_moment(1.2) ==
          doctest::Approx(stable_abs_moment_ref(1.5, 0.0, 1.2)).epsilon(1e-6));
    CHECK(sym.signed_abs_moment(1.2) == doctest::Approx(0.0).scale(1.0).epsilon(1e-6));
    const WeightLaw skw = WeightLaw::exact_stable(1.5, 1.0, 0.3, 0.0);
    CHECK(skw.abs_moment(1.2) ==
          doctest::Approx(stable_abs_moment_ref(1.5, 0.3, 1.2)).epsilon(1e-6));
    CHECK(skw.signed_abs_moment(1.2) ==
          doctest::Approx(stable_signed_moment_ref(1.5, 0.3, 1.2)).epsilon(1e-6));
    // Scale homogeneity.
    const WeightLaw big = WeightLaw::exact_stable(1.5, 2.0, 0.3, 0.0);
    CHECK(big.abs_moment(1.2) ==
          doctest::Approx(std::pow(2.0, 1.2) * skw.abs_moment(1.2)).epsilon(1e-6));
  }
  SUBCASE("two-sided pareto closed forms") {
    const WeightLaw g = WeightLaw::two_sided_pareto(1.8, 2.0, 0.7);
    CHECK(g.abs_mean() == doctest::Approx(1.8 * 2.0 / 0.8));
    CHECK(g.abs_moment(1.5) == doctest::Approx(1.8 * std::pow(2.0, 1.5) / 0.3));
    CHECK(g.signed_abs_moment(1.5) ==
          doctest::Approx(0.4 * 1.8 * std::pow(2.0, 1.5) / 0.3));
  }
  SUBCASE("order outside (0, alpha) is rejected") {
    const WeightLaw g = WeightLaw::two_sided_pareto(1.5, 1.0, 0.5);
    CHECK_THROWS_AS(g.abs_moment(1.5), std::invalid_argument);
    CHECK_THROWS_AS(g.signed_abs_moment(1.0), std::invalid_argument);
  }
}

TEST_CASE("constructor validation names the offending field") {
  CHECK_THROWS_WITH(WeightLaw::exact_stable(0.5, 1.0, 0.0, 0.0),
                    "alpha must lie in (1,2]");
  CHECK_THROWS_WITH(WeightLaw::exact_stable(1.5, -1.0, 0.0, 0.0),
                    "sigma must be nonnegative");
  CHECK_THROWS_WITH(WeightLaw::exact_stable(1.5, 1.0, 2.0, 0.0), "b must lie in [-1,1]");
  CHECK_THROWS_AS(WeightLaw::two_sided_pareto(2.0, 1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(WeightLaw::gaussian(0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(RadiusLaw::pareto_tail(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(RadiusLaw::small_power(1.5, 1.0, -1.0), std::invalid_argument);
}

TEST_CASE("truncated moment slopes of a heavy-tailed law") {
  const WeightLaw g = WeightLaw::two_sided_pareto(1.5, 0.01, 0.5);
  RngStream rng(104, 0);
  const std::vector<double> grid = {1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0};
  const TruncatedMomentSlopes s = truncated_moment_check(g, grid, 4000000, rng);
  CHECK(s.s1 == doctest::Approx(1.0 - 1.5).epsilon(0.4));
  CHECK(s.s2 == doctest::Approx(2.0 - 1.5).epsilon(0.4));
  CHECK_THROWS_AS(truncated_moment_check(WeightLaw::gaussian(0.0, 1.0), grid, 10, rng),
                  std::invalid_argument);
  CHECK_THROWS_AS(truncated_moment_check(g, {1.0, 2.0, 3.0, 4.0, 5.0}, 10, rng),
                  std::invalid_argument);
}

TEST_CASE("radius law moments") {
  SUBCASE("pareto tail") {
    const RadiusLaw f = RadiusLaw::pareto_tail(2.5, 2.0);
    CHECK(f.c_beta() == doctest::Approx(2.5 * std::pow(2.0, 2.5)));
    CHECK(f.mass_above(0.0) == doctest::Approx(1.0));  // probability law
    CHECK(f.moment(1.0) == doctest::Approx(2.5 * 2.0 / 1.5));
    CHECK(f.moment_between(1.0, 3.0, 6.0) ==
          doctest::Approx(f.c_beta() * (std::pow(3.0, -1.5) - std::pow(6.0, -1.5)) / 1.5));
    CHECK(f.moment_between(2.5, 2.0, 4.0) == doctest::Approx(f.c_beta() * std::log(2.0)));
    CHECK_THROWS_WITH(f.moment(2.5), "divergent radius moment: k >= beta");
  }
  SUBCASE("small power") {
    const RadiusLaw f = RadiusLaw::small_power(0.5, 1.0, 2.0);
    CHECK(f.c_beta() == doctest::Approx(2.0));
    CHECK(f.moment(0.7) == doctest::Approx(2.0 / 0.2));
    CHECK(f.mass_above(0.25) == doctest::Approx(2.0 * (std::pow(0.25, -0.5) - 1.0) / 0.5));
    CHECK_THROWS_AS(f.moment(0.5), std::invalid_argument);
    CHECK_THROWS_AS(f.moment(0.3), std::invalid_argument);
  }
}

TEST_CASE("rescaling is the exact image measure") {
  for (const RadiusLaw& f : {RadiusLaw::pareto_tail(2.5, 1.0),
                             RadiusLaw::small_power(0.5, 1.0, 1.0)}) {
    const double rho = 0.013;
    const RadiusLaw fr = f.rescaled(rho);
    const double k = f.kind() == RadiusKind::ParetoTail ? 1.5 : 0.9;
    CHECK(fr.moment(k) == doctest::Approx(std::pow(rho, k) * f.moment(k)).epsilon(1e-12));
    CHECK(fr.moment(k) == doctest::Approx(moment_rho(f, rho, k)).epsilon(1e-12));
    CHECK(fr.beta() == f.beta());
    // c_beta transforms as c rho^beta.
    CHECK(fr.c_beta() == doctest::Approx(f.c_beta() * std::pow(rho, f.beta())).epsilon(1e-12));
  }
}

TEST_CASE("size-biased radius sampling") {
  RngStream rng(105, 0);
  SUBCASE("pareto tail, k = 1") {
    const RadiusLaw f = RadiusLaw::pareto_tail(2.5, 1.0);
    double s = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
      const double r = f.sample_size_biased(1.0, 0.0, rng);
      CHECK(r >= 1.0);
      s += r;
    }
    // E[r under r f(r)] = m2/m1.
    CHECK(s / n == doctest::Approx(f.moment(2.0) / f.moment(1.0)).epsilon(0.02));
  }
  SUBCASE("small power, k = 0 with a positive floor") {
    const RadiusLaw f = RadiusLaw::small_power(0.5, 1.0, 1.0);
    const double delta = 0.1;
    double s = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
      const double r = f.sample_size_biased(0.0, delta, rng);
      CHECK(r >= delta);
      CHECK(r <= 1.0);
      s += r;
    }
    CHECK(s / n == doctest::Approx(f.moment_between(1.0, delta, 2.0) /
                                   f.mass_above(delta)).epsilon(0.02));
    CHECK_THROWS_AS(f.sample_size_biased(0.0, 0.0, rng), std::invalid_argument);
  }
}

TEST_CASE("mean field closed form") {
  const RadiusLaw f = RadiusLaw::pareto_tail(2.5, 0.05);
  const WeightLaw g = WeightLaw::gaussian(3.0, 1.0);
  const Measure mu = Measure::interval_lebesgue(2.0);
  CHECK(mean_field(50.0, f, g, mu) ==
        doctest::Approx(50.0 * 2.0 * 3.0 * (2.5 * 0.05 / 1.5) * 2.0).epsilon(1e-12));
}

TEST_CASE("bek ratios approach one as rho vanishes") {
  const RadiusLaw f = RadiusLaw::pareto_tail(2.5, 1.0);
  const auto ratios = bek_ratios(f, {1e-1, 1e-2, 1e-3}, 1.0, 4.0);
  REQUIRE(ratios.size() == 3);
  CHECK(std::fabs(ratios[2] - 1.0) < std::fabs(ratios[0] - 1.0));
  CHECK(ratios[2] == doctest::Approx(1.0).epsilon(0.02));
  CHECK_THROWS_AS(bek_ratios(f, {0.1}, 3.0, 4.0), std::invalid_argument);
}
