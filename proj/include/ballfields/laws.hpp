#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "ballfields/measures.hpp"
#include "ballfields/rng.hpp"
#include "ballfields/stats.hpp"

namespace ballfields {

/// One-dimensional stable marginal in the parameterization
/// cf(theta) = exp(-scale^index |theta|^index (1 - i skew eps(theta) tan(pi index/2))
///             + i shift theta); index = 2 is Gaussian with variance 2 scale^2.
struct StableParams {
  double index = 2.0;
  double scale = 0.0;
  double skew = 0.0;
  double shift = 0.0;
};

/// Exact draw (Chambers-Mallows-Stuck) in the convention above.
double sample_stable(const StableParams& p, RngStream& rng);

std::complex<double> stable_cf_value(const StableParams& p, double theta);

/// I_q = int_0^inf (1 - cos r) r^{-1-q} dr, closed form, q in (0,2).
double i_const(double q);
/// S_q = int_0^inf (r - sin r) r^{-1-q} dr = I_q |tan(pi q/2)|, q in (1,2).
double s_const(double q);

enum class WeightKind { PointMass, Gaussian, ExactStable, TwoSidedPareto };

/// Weight (mark) distribution G, in the normal domain of attraction of an
/// alpha-stable law. Immutable; all randomness flows through explicit streams.
class WeightLaw {
 public:
  static WeightLaw point_mass(double m0);
  static WeightLaw gaussian(double mean, double variance);
  static WeightLaw exact_stable(double alpha, double sigma, double b, double tau);
  /// Density alpha scale^alpha / (2|m|^{1+alpha}) on |m| > scale, with mass
  /// right_fraction on the positive side.
  static WeightLaw two_sided_pareto(double alpha, double scale, double right_fraction);

  WeightKind kind() const { return kind_; }
  /// Stability index of the attracting law (2 for PointMass/Gaussian).
  double alpha() const { return alpha_; }
  double mean() const { return mean_; }
  /// Attracting StableParams (sigma, b, shift 0 after centering).
  const StableParams& attracting() const { return attracting_; }
  /// Raw variant parameters in declaration order.
  const std::vector<double>& params() const { return params_; }

  std::complex<double> cf(double theta) const;
  /// Psi_G(u) = int (e^{imu} - 1 - imu) G(dm) = cf(u) - 1 - i u mean.
  std::complex<double> psi(double u) const;
  double sample(RngStream& rng) const;

  double abs_mean() const;  // E|m|
  /// E|m|^q and E[eps(m)|m|^q] for q in (1,2), q < alpha.
  double abs_moment(double q) const;
  double signed_abs_moment(double q) const;

 private:
  WeightLaw() = default;

  WeightKind kind_ = WeightKind::PointMass;
  std::vector<double> params_;
  double alpha_ = 2.0;
  double mean_ = 0.0;
  StableParams attracting_;
  struct PsiCache {
    std::mutex mutex;
    std::map<double, std::complex<double>> values;
  };
  std::shared_ptr<PsiCache> psi_cache_;
};

/// -sigma^alpha |theta|^alpha (1 - i b eps(theta) tan(pi alpha/2)) from the
/// attracting parameters; the theta->0 equivalent of psi.
std::complex<double> small_theta_equivalent(const WeightLaw& g, double theta);

struct TruncatedMomentSlopes {
  std::vector<double> x_grid;
  std::vector<double> tail_abs;   // int_{|m|>=x} |m| G(dm), Monte Carlo
  std::vector<double> center_sq;  // int_{-x}^{x} m^2 G(dm), Monte Carlo
  double s1 = 0.0;                // log-log slope of tail_abs, contract 1-alpha
  double s2 = 0.0;                // log-log slope of center_sq, contract 2-alpha
};

/// Monte Carlo probe of the truncated-moment growth exponents; heavy-tailed
/// laws only (alpha < 2).
TruncatedMomentSlopes truncated_moment_check(const WeightLaw& g,
                                             const std::vector<double>& x_grid,
                                             std::size_t n_samples, RngStream& rng);

enum class RadiusKind { ParetoTail, SmallPower };

/// Radius measure F with power-law behavior at the relevant end of R^+.
class RadiusLaw {
 public:
  /// Probability density beta r_min^beta r^{-1-beta} on (r_min, inf); zoom-out.
  static RadiusLaw pareto_tail(double beta, double r_min);
  /// Infinite measure with density c_beta r^{-1-beta} on (0, r_max]; zoom-in.
  static RadiusLaw small_power(double beta, double r_max, double c_beta = 1.0);

  RadiusKind kind() const { return kind_; }
  double beta() const { return beta_; }
  /// Tail side: -1 (zoom-out, r -> inf) or +1 (zoom-in, r -> 0).
  int epsilon() const { return kind_ == RadiusKind::ParetoTail ? -1 : 1; }
  double c_beta() const;
  double r_min() const { return edge_; }  // ParetoTail
  double r_max() const { return edge_; }  // SmallPower
  double scale_constant() const { return c_; }

  double density(double r) const;
  /// int r^k F(dr) over the full support; throws when divergent.
  double moment(double k) const;
  /// int_{lo <= r < hi} r^k F(dr); hi may be +inf.
  double moment_between(double k, double lo, double hi) const;
  /// F({r >= delta}).
  double mass_above(double delta) const;

  /// Image of F under r -> rho r; stays in the family.
  RadiusLaw rescaled(double rho) const;

  /// Draw from the density proportional to r^k f(r) 1_{r >= delta}.
  double sample_size_biased(double k, double delta, RngStream& rng) const;

 private:
  RadiusLaw() = default;
  RadiusKind kind_ = RadiusKind::ParetoTail;
  double beta_ = 2.0;
  double edge_ = 1.0;  // r_min or r_max
  double c_ = 1.0;     // SmallPower density constant
};

inline double moment_rho(const RadiusLaw& f, double rho, double k) {
  return std::pow(rho, k) * f.moment(k);
}

/// E[M(mu)] = lambda c_d int m G int r^d F mu(R^d).
double mean_field(double lambda, const RadiusLaw& f, const WeightLaw& g, const Measure& mu);

/// int g dF_rho / (C_beta rho^beta int g(r) r^{-1-beta} dr) for
/// g(r) = min(r^q', r^p'), p' < beta < q'; one ratio per rho, contract -> 1.
std::vector<double> bek_ratios(const RadiusLaw& f, const std::vector<double>& rho_ladder,
                               double p_prime, double q_prime);

}  // namespace ballfields
