#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "ballfields/laws.hpp"
#include "ballfields/measures.hpp"

namespace ballfields {

struct CFCurve {
  std::vector<double> theta;
  std::vector<std::complex<double>> value;
  std::string method;  // "closed-form" | "quadrature" | "empirical"
  std::vector<double> error;
};

/// Marginal parameters of Z_alpha(mu): scale^a = sigma^a C_b iint |mu(B)|^a
/// r^{-1-b} dr dx, skew = b iint eps(mu(B))|mu(B)|^a / iint |mu(B)|^a.
StableParams z_alpha_params(const Measure& mu, double alpha, double beta, double c_beta,
                            double sigma, double b);

/// Exponent of the compensated-Poisson limit:
/// C_b a^{d-b} iint Psi_G(theta mu(B(x,r))) r^{-1-b} dr dx.
std::complex<double> j_exponent(const Measure& mu, double a, const WeightLaw& g,
                                double beta, double c_beta, double theta);

CFCurve j_cf(const Measure& mu, double a, const WeightLaw& g, double beta, double c_beta,
             const std::vector<double>& theta_grid);

/// Per-a sup distance between the CF of a^{-(d-b)/alpha} J(mu_a) and the CF of
/// Z_alpha(mu); the contract is decay as a^{d-b} -> inf.
std::vector<double> zj_bridge(const Measure& mu, const WeightLaw& g, double beta,
                              double c_beta, const std::vector<double>& a_ladder,
                              const std::vector<double>& theta_grid);

/// gamma-regime marginal (stable index gamma = beta/d); mu must be
/// absolutely continuous with density phi. The mark-side skew constant is the
/// sign fixed by direct quadrature of the limit exponent (see gamma_mark_skew).
StableParams z_tilde_gamma_params(const Measure& mu, double beta, double alpha,
                                  double c_beta, const WeightLaw& g);

/// + int eps(m)|m|^gamma G / int |m|^gamma G: the skewness constant of the
/// gamma-regime marks in the CF convention used throughout.
double gamma_mark_skew(const WeightLaw& g, double gamma);

/// alpha-regime marginal: scale^a = sigma^a c_d^a int r^{ad} F int |phi|^a,
/// skew = b int eps(phi)|phi|^a / int |phi|^a; requires beta > alpha d.
StableParams z_tilde_alpha_params(const Measure& mu, const RadiusLaw& f,
                                  const WeightLaw& g);

/// [mu1, mu2]_alpha = sigma^a C_b iint mu1(B) eps(mu2(B)) |mu2(B)|^{a-1}
/// r^{-1-b} dr dx.
double covariation(const Measure& mu1, const Measure& mu2, double alpha, double beta,
                   double c_beta, double sigma);

CFCurve stable_cf(const StableParams& p, const std::vector<double>& theta_grid);

inline double sample_limit(const StableParams& p, RngStream& rng) {
  return sample_stable(p, rng);
}

/// int |phi|^q dx and int eps(phi)|phi|^q dx for an absolutely continuous mu.
std::pair<double, double> density_power_integrals(const Measure& mu, double q);

/// Symmetric 21-point grid [-t*, t*] with |cf(t*)| ~ 0.2 (cf modulus assumed
/// decreasing); keeps the grid informative for heavy tails.
std::vector<double> select_theta_grid(const std::function<double(double)>& cf_modulus,
                                      int points = 21);

}  // namespace ballfields
