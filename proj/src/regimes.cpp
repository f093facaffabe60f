#include "ballfields/regimes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ballfields {

std::string regime_name(RegimeLabel label) {
  switch (label) {
    case RegimeLabel::StableDependent: return "stable-dependent";
    case RegimeLabel::Intermediate: return "intermediate";
    case RegimeLabel::GammaRegime: return "stable-independent-gamma";
    case RegimeLabel::AlphaRegime: return "stable-independent-alpha";
    case RegimeLabel::TrivialN0: return "trivial-n0";
    case RegimeLabel::Rejected: return "rejected";
  }
  return "rejected";
}

double Classification::normalization(double rho) const {
  const double lam = lambda(rho);
  switch (label) {
    case RegimeLabel::StableDependent:
      return std::pow(lam, 1.0 / alpha) * std::pow(rho, beta / alpha);
    case RegimeLabel::Intermediate:
      return 1.0;
    case RegimeLabel::GammaRegime:
      return std::pow(lam, static_cast<double>(d) / beta) * std::pow(rho, d);
    case RegimeLabel::AlphaRegime:
      return std::pow(lam, 1.0 / alpha) * std::pow(rho, d);
    case RegimeLabel::TrivialN0:
      return std::pow(lam, 1.0 / alpha) * std::pow(rho, static_cast<double>(d) / alpha);
    case RegimeLabel::Rejected:
      break;
  }
  throw std::logic_error("no normalization for a rejected regime");
}

Classification classify(int d, double alpha, double beta, int epsilon,
                        double theta_lambda, double lambda0) {
  Classification c;
  c.d = d;
  c.alpha = alpha;
  c.beta = beta;
  c.epsilon = epsilon;
  c.lambda0 = lambda0;
  c.theta_lambda = theta_lambda;
  auto reject = [&](const std::string& why) {
    c.label = RegimeLabel::Rejected;
    c.reason = why;
    return c;
  };
  if (d < 1 || d > kMaxDim) return reject("dimension must lie in {1,2,3}");
  if (!(alpha > 1.0 && alpha <= 2.0)) return reject("alpha must lie in (1,2]");
  if (!(beta > 0.0)) return reject("beta must be positive");
  if (epsilon != -1 && epsilon != 1) return reject("epsilon must be -1 or +1");
  if (!(lambda0 > 0.0)) return reject("lambda0 must be positive");
  if (!(theta_lambda >= 0.0)) return reject("theta_lambda must be nonnegative");

  if (epsilon == -1) {
    // Zoom-out, rho -> 0, heavy radius tail.
    if (!(beta > d)) return reject("zoom-out requires beta > d");
    if (theta_lambda > beta) {
      c.label = RegimeLabel::StableDependent;
      return c;
    }
    if (theta_lambda == beta) {
      c.label = RegimeLabel::Intermediate;
      c.a = std::pow(lambda0, 1.0 / (d - beta));
      return c;
    }
    if (theta_lambda == 0.0) {
      c.label = RegimeLabel::TrivialN0;
      return c;
    }
    if (beta < alpha * d) {
      c.label = RegimeLabel::GammaRegime;
      return c;
    }
    if (beta > alpha * d) {
      c.label = RegimeLabel::AlphaRegime;
      return c;
    }
    return reject("boundary beta = alpha d is not covered by any theorem");
  }
  // Zoom-in, rho -> inf, radii concentrated near 0.
  if (!(beta < d)) return reject("zoom-in requires beta < d");
  if (theta_lambda < beta) {
    c.label = RegimeLabel::StableDependent;
    return c;
  }
  if (theta_lambda == beta) {
    c.label = RegimeLabel::Intermediate;
    c.a = std::pow(lambda0, 1.0 / (d - beta));
    return c;
  }
  c.label = RegimeLabel::TrivialN0;  // lambda rho^beta -> 0 with beta < d
  return c;
}

std::vector<double> default_rho_ladder(int epsilon) {
  if (epsilon == -1) return {1e-1, 1e-2, 1e-3, 1e-4};
  return {1e1, 1e2, 1e3, 1e4};
}

ConvergenceReport run_convergence(const RegimeSpec& spec, const Measure& mu,
                                  const RadiusLaw& f, const WeightLaw& g,
                                  const ConvergenceOptions& opts) {
  ConvergenceReport rep;
  rep.cls = classify(spec.d, spec.alpha, spec.beta, spec.epsilon, spec.theta_lambda,
                     spec.lambda0);
  rep.threshold = opts.threshold;
  if (rep.cls.label == RegimeLabel::Rejected)
    throw std::invalid_argument("regime rejected: " + rep.cls.reason);
  if (rep.cls.label == RegimeLabel::TrivialN0)
    throw std::invalid_argument(
        "trivial-n0 regime is documented by the classifier but not simulated");
  if (mu.dim() != spec.d) throw std::invalid_argument("measure dimension mismatch");
  if (f.beta() != spec.beta) throw std::invalid_argument("radius law beta mismatch");
  if (f.epsilon() != spec.epsilon)
    throw std::invalid_argument("radius law tail side does not match the zoom direction");

  const double c_beta = f.c_beta();
  const StableParams& att = g.attracting();

  std::vector<double> theta = opts.theta_grid;
  switch (rep.cls.label) {
    case RegimeLabel::StableDependent:
      rep.limit_params =
          z_alpha_params(mu, att.index, spec.beta, c_beta, att.scale, att.skew);
      if (theta.empty())
        theta = select_theta_grid(
            [&](double t) { return std::abs(stable_cf_value(rep.limit_params, t)); });
      rep.limit = stable_cf(rep.limit_params, theta);
      break;
    case RegimeLabel::Intermediate: {
      const double a = rep.cls.a;
      if (theta.empty())
        theta = select_theta_grid([&](double t) {
          return std::exp(j_exponent(mu, a, g, spec.beta, c_beta, t).real());
        });
      rep.limit = j_cf(mu, a, g, spec.beta, c_beta, theta);
      break;
    }
    case RegimeLabel::GammaRegime:
      rep.limit_params = z_tilde_gamma_params(mu, spec.beta, spec.alpha, c_beta, g);
      if (theta.empty())
        theta = select_theta_grid(
            [&](double t) { return std::abs(stable_cf_value(rep.limit_params, t)); });
      rep.limit = stable_cf(rep.limit_params, theta);
      break;
    case RegimeLabel::AlphaRegime:
      rep.limit_params = z_tilde_alpha_params(mu, f, g);
      if (theta.empty())
        theta = select_theta_grid(
            [&](double t) { return std::abs(stable_cf_value(rep.limit_params, t)); });
      rep.limit = stable_cf(rep.limit_params, theta);
      break;
    default:
      break;
  }

  std::vector<double> ladder =
      spec.rho_ladder.empty() ? default_rho_ladder(spec.epsilon) : spec.rho_ladder;
  for (std::size_t li = 0; li < ladder.size(); ++li) {
    const double rho = ladder[li];
    ConvergenceRow row;
    row.rho = rho;
    row.lambda = rep.cls.lambda(rho);
    row.n = rep.cls.normalization(rho);
    const RadiusLaw f_rho = f.rescaled(rho);
    row.delta = f.epsilon() == 1
                    ? choose_truncation(row.lambda, f_rho, g, mu, 1e-3 * row.n)
                    : 0.0;
    row.truncation = truncation_bound(row.lambda, f_rho, g, mu, row.delta);
    ReplicateOptions ro;
    ro.count = opts.replicates;
    ro.seed = opts.seed;
    ro.stream_base = 1 + li * opts.replicates;
    ro.threads = opts.threads;
    ro.fast_path_threshold = opts.fast_path_threshold;
    std::vector<double> samples =
        replicate(mu, row.lambda, f_rho, g, row.n, row.delta, ro);
    const EmpiricalCF ecf = empirical_cf(samples, theta);
    rep.replicate_radius = ecf.radius;
    const CFDistance dist = cf_distance(ecf, rep.limit.theta, rep.limit.value);
    row.distance = dist.distance;
    row.theta_at = dist.theta_at;
    row.abs_diff.reserve(theta.size());
    for (std::size_t j = 0; j < theta.size(); ++j)
      row.abs_diff.push_back(std::abs(ecf.value[j] - rep.limit.value[j]));
    rep.rows.push_back(row);
    rep.samples.push_back(std::move(samples));
  }

  int inversions = 0;
  for (std::size_t i = 1; i < rep.rows.size(); ++i)
    if (rep.rows[i].distance > rep.rows[i - 1].distance) ++inversions;
  rep.monotone_pass = inversions <= 1;
  rep.final_pass = !rep.rows.empty() && rep.rows.back().distance < opts.threshold;
  return rep;
}

FbmReport fbm_variance_check(const RadiusLaw& f, const WeightLaw& g, double lambda0,
                             double theta_lambda, double rho,
                             const std::vector<double>& t_grid, std::size_t replicates,
                             std::uint64_t seed, int threads,
                             double fast_path_threshold) {
  if (g.alpha() != 2.0)
    throw std::invalid_argument("fbm check requires alpha = 2 weights");
  if (f.kind() != RadiusKind::ParetoTail || !(f.beta() > 1.0 && f.beta() < 2.0))
    throw std::invalid_argument("fbm check requires a zoom-out radius law with beta in (1,2)");
  const Classification cls = classify(1, 2.0, f.beta(), -1, theta_lambda, lambda0);
  if (cls.label != RegimeLabel::StableDependent)
    throw std::invalid_argument("fbm check requires the stable-dependent regime");
  FbmReport rep;
  rep.t_grid = t_grid;
  const double lambda = cls.lambda(rho);
  const double n = cls.normalization(rho);
  const RadiusLaw f_rho = f.rescaled(rho);
  for (std::size_t ti = 0; ti < t_grid.size(); ++ti) {
    const Measure mu = Measure::interval_lebesgue(t_grid[ti]);
    ReplicateOptions ro;
    ro.count = replicates;
    ro.seed = seed;
    ro.stream_base = 1 + ti * replicates;
    ro.threads = threads;
    ro.fast_path_threshold = fast_path_threshold;
    const std::vector<double> samples = replicate(mu, lambda, f_rho, g, n, 0.0, ro);
    rep.variances.push_back(variance(samples));
  }
  rep.fit = power_fit(rep.t_grid, rep.variances);
  return rep;
}

}  // namespace ballfields
