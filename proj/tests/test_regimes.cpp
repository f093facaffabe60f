#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ballfields/regimes.hpp"

using namespace ballfields;

TEST_CASE("classifier covers every branch") {
  SUBCASE("zoom-out labels") {
    CHECK(classify(1, 1.8, 1.5, -1, 2.0, 1.0).label == RegimeLabel::StableDependent);
    const Classification im = classify(1, 1.8, 1.5, -1, 1.5, 4.0);
    CHECK(im.label == RegimeLabel::Intermediate);
    CHECK(im.a == doctest::Approx(std::pow(4.0, 1.0 / (1.0 - 1.5))));
    CHECK(classify(1, 1.8, 1.5, -1, 0.0, 1.0).label == RegimeLabel::TrivialN0);
    CHECK(classify(1, 1.8, 1.5, -1, 0.75, 1.0).label == RegimeLabel::GammaRegime);
    CHECK(classify(1, 1.5, 2.5, -1, 0.75, 1.0).label == RegimeLabel::AlphaRegime);
    CHECK(classify(1, 1.5, 1.5, -1, 0.75, 1.0).reason ==
          "boundary beta = alpha d is not covered by any theorem");
    CHECK(classify(1, 1.8, 0.5, -1, 1.0, 1.0).reason == "zoom-out requires beta > d");
  }
  SUBCASE("zoom-in labels") {
    CHECK(classify(1, 1.8, 0.5, 1, 0.25, 1.0).label == RegimeLabel::StableDependent);
    CHECK(classify(1, 1.8, 0.5, 1, 0.5, 2.0).label == RegimeLabel::Intermediate);
    CHECK(classify(1, 1.8, 0.5, 1, 0.75, 1.0).label == RegimeLabel::TrivialN0);
    CHECK(classify(1, 1.8, 1.5, 1, 0.25, 1.0).reason == "zoom-in requires beta < d");
  }
  SUBCASE("parameter validation") {
    CHECK(classify(0, 1.8, 1.5, -1, 2.0, 1.0).reason == "dimension must lie in {1,2,3}");
    CHECK(classify(1, 1.0, 1.5, -1, 2.0, 1.0).reason == "alpha must lie in (1,2]");
    CHECK(classify(1, 1.8, 0.0, -1, 2.0, 1.0).reason == "beta must be positive");
    CHECK(classify(1, 1.8, 1.5, 0, 2.0, 1.0).reason == "epsilon must be -1 or +1");
    CHECK(classify(1, 1.8, 1.5, -1, 2.0, 0.0).reason == "lambda0 must be positive");
    CHECK(classify(1, 1.8, 1.5, -1, -1.0, 1.0).reason ==
          "theta_lambda must be nonnegative");
  }
  SUBCASE("names") {
    CHECK(regime_name(RegimeLabel::StableDependent) == "stable-dependent");
    CHECK(regime_name(RegimeLabel::Intermediate) == "intermediate");
    CHECK(regime_name(RegimeLabel::GammaRegime) == "stable-independent-gamma");
    CHECK(regime_name(RegimeLabel::AlphaRegime) == "stable-independent-alpha");
    CHECK(regime_name(RegimeLabel::TrivialN0) == "trivial-n0");
    CHECK(regime_name(RegimeLabel::Rejected) == "rejected");
  }
}

TEST_CASE("intensity and normalization formulas") {
  const double rho = 1e-2;
  const Classification sd = classify(1, 1.8, 1.5, -1, 2.0, 3.0);
  CHECK(sd.lambda(rho) == doctest::Approx(3.0 * std::pow(rho, -2.0)));
  CHECK(sd.normalization(rho) ==
        doctest::Approx(std::pow(sd.lambda(rho), 1.0 / 1.8) * std::pow(rho, 1.5 / 1.8)));
  const Classification im = classify(1, 1.8, 1.5, -1, 1.5, 4.0);
  CHECK(im.normalization(rho) == 1.0);
  const Classification ga = classify(1, 1.8, 1.5, -1, 0.75, 1.0);
  CHECK(ga.normalization(rho) ==
        doctest::Approx(std::pow(ga.lambda(rho), 1.0 / 1.5) * rho));
  const Classification al = classify(1, 1.5, 2.5, -1, 0.75, 1.0);
  CHECK(al.normalization(rho) ==
        doctest::Approx(std::pow(al.lambda(rho), 1.0 / 1.5) * rho));
  CHECK_THROWS_AS(classify(0, 1.8, 1.5, -1, 2.0, 1.0).normalization(rho),
                  std::logic_error);
  CHECK(default_rho_ladder(-1) == std::vector<double>{1e-1, 1e-2, 1e-3, 1e-4});
  CHECK(default_rho_ladder(1) == std::vector<double>{1e1, 1e2, 1e3, 1e4});
}

TEST_CASE("run_convergence rejects inconsistent inputs") {
  const Measure mu = Measure::interval_lebesgue(1.0);
  const RadiusLaw f = RadiusLaw::pareto_tail(1.5, 1.0);
  const WeightLaw g = WeightLaw::point_mass(1.0);
  ConvergenceOptions opts;
  opts.replicates = 10;

  RegimeSpec spec;
  spec.d = 1;
  spec.alpha = 2.0;
  spec.beta = 1.5;
  spec.epsilon = -1;
  spec.theta_lambda = 2.0;

  SUBCASE("rejected classification") {
    RegimeSpec bad = spec;
    bad.beta = 0.5;
    CHECK_THROWS_WITH_AS(run_convergence(bad, mu, f, g, opts),
                         "regime rejected: zoom-out requires beta > d",
                         std::invalid_argument);
  }
  SUBCASE("trivial regime is not simulated") {
    RegimeSpec triv = spec;
    triv.theta_lambda = 0.0;
    CHECK_THROWS_AS(run_convergence(triv, mu, f, g, opts), std::invalid_argument);
  }
  SUBCASE("measure dimension mismatch") {
    RegimeSpec d2 = spec;
    d2.d = 2;
    d2.beta = 3.0;
    d2.theta_lambda = 4.0;
    CHECK_THROWS_WITH_AS(run_convergence(d2, mu, f, g, opts),
                         "measure dimension mismatch", std::invalid_argument);
  }
  SUBCASE("radius law mismatches") {
    RegimeSpec off = spec;
    off.beta = 1.6;
    CHECK_THROWS_WITH_AS(run_convergence(off, mu, f, g, opts),
                         "radius law beta mismatch", std::invalid_argument);
    RegimeSpec in = spec;
    in.beta = 0.5;
    in.epsilon = 1;
    in.theta_lambda = 0.25;
    CHECK_THROWS_WITH_AS(
        run_convergence(in, mu, RadiusLaw::pareto_tail(0.5, 1.0), g, opts),
        "radius law tail side does not match the zoom direction",
        std::invalid_argument);
  }
}

TEST_CASE("stable-dependent zoom-out converges to the gaussian limit") {
  const Measure mu = Measure::interval_lebesgue(1.0);
  const RadiusLaw f = RadiusLaw::pareto_tail(1.5, 1.0);
  const WeightLaw g = WeightLaw::point_mass(1.0);
  RegimeSpec spec;
  spec.d = 1;
  spec.alpha = 2.0;
  spec.beta = 1.5;
  spec.epsilon = -1;
  spec.theta_lambda = 2.0;
  spec.lambda0 = 1.0;
  spec.rho_ladder = {1e-1, 1e-2, 1e-3};
  ConvergenceOptions opts;
  opts.replicates = 1500;
  opts.seed = 17;
  opts.threshold = 0.1;
  opts.fast_path_threshold = 5e3;
  const ConvergenceReport rep = run_convergence(spec, mu, f, g, opts);
  CHECK(rep.cls.label == RegimeLabel::StableDependent);
  CHECK(rep.limit_params.index == 2.0);
  CHECK(rep.limit_params.skew == 0.0);
  REQUIRE(rep.rows.size() == 3);
  for (const auto& row : rep.rows) {
    CHECK(row.delta == 0.0);
    CHECK(row.truncation == 0.0);
    CHECK(row.abs_diff.size() == rep.limit.theta.size());
  }
  CHECK(rep.rows[2].distance < rep.rows[0].distance);
  CHECK(rep.final_pass);
  CHECK(rep.monotone_pass);
  CHECK(rep.replicate_radius == doctest::Approx(3.0 / std::sqrt(1500.0)));
  REQUIRE(rep.samples.size() == 3);
  CHECK(rep.samples[0].size() == 1500);
}

TEST_CASE("fbm variance growth") {
  const RadiusLaw f = RadiusLaw::pareto_tail(1.5, 1.0);
  const WeightLaw g = WeightLaw::point_mass(1.0);
  SUBCASE("hypotheses are enforced") {
    CHECK_THROWS_WITH_AS(
        fbm_variance_check(f, WeightLaw::exact_stable(1.5, 1.0, 0.0, 0.0), 1.0, 2.0,
                           0.05, {1.0, 2.0}, 10, 0),
        "fbm check requires alpha = 2 weights", std::invalid_argument);
    CHECK_THROWS_AS(fbm_variance_check(RadiusLaw::small_power(0.5, 1.0, 1.0), g, 1.0,
                                       2.0, 0.05, {1.0, 2.0}, 10, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(fbm_variance_check(RadiusLaw::pareto_tail(2.5, 1.0), g, 1.0, 2.0,
                                       0.05, {1.0, 2.0}, 10, 0),
                    std::invalid_argument);
    CHECK_THROWS_WITH_AS(fbm_variance_check(f, g, 1.0, 0.0, 0.05, {1.0, 2.0}, 10, 0),
                         "fbm check requires the stable-dependent regime",
                         std::invalid_argument);
  }
  SUBCASE("slope tracks 3 - beta") {
    const FbmReport rep =
        fbm_variance_check(f, g, 1.0, 2.0, 0.05, {0.5, 1.0, 2.0, 4.0}, 2000, 29);
    CHECK(rep.variances.size() == 4);
    CHECK(rep.fit.slope == doctest::Approx(1.5).epsilon(0.1));
    CHECK(rep.fit.residual < 0.05);
  }
}
