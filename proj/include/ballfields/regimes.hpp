#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ballfields/laws.hpp"
#include "ballfields/limits.hpp"
#include "ballfields/measures.hpp"
#include "ballfields/simulate.hpp"
#include "ballfields/stats.hpp"

namespace ballfields {

enum class RegimeLabel {
  StableDependent,   // lambda rho^beta -> inf, n1 = lambda^{1/a} rho^{b/a}
  Intermediate,      // lambda rho^beta -> a^{d-b}, n = 1
  GammaRegime,       // lambda rho^beta -> 0, lambda -> inf, d < b < a d, n2
  AlphaRegime,       // b > a d, lambda -> inf, n3 = lambda^{1/a} rho^d
  TrivialN0,         // lambda rho^beta -> 0 with bounded lambda; documented only
  Rejected,
};

std::string regime_name(RegimeLabel label);

struct Classification {
  RegimeLabel label = RegimeLabel::Rejected;
  std::string reason;  // violated hypothesis when Rejected
  double a = 0.0;      // intermediate dilation parameter
  int d = 1;
  double alpha = 2.0;
  double beta = 2.0;
  int epsilon = -1;
  double lambda0 = 1.0;
  double theta_lambda = 0.0;

  double lambda(double rho) const { return lambda0 * std::pow(rho, -theta_lambda); }
  double normalization(double rho) const;
};

/// Deterministic regime label from (d, alpha, beta, epsilon, theta_lambda);
/// lambda(rho) = lambda0 rho^{-theta_lambda}. Unreachable combinations come
/// back as Rejected with the violated hypothesis named.
Classification classify(int d, double alpha, double beta, int epsilon,
                        double theta_lambda, double lambda0);

std::vector<double> default_rho_ladder(int epsilon);

struct RegimeSpec {
  int d = 1;
  double alpha = 2.0;
  double beta = 2.0;
  int epsilon = -1;
  double lambda0 = 1.0;
  double theta_lambda = 0.0;
  std::vector<double> rho_ladder;  // empty -> default ladder
};

struct ConvergenceRow {
  double rho = 0.0;
  double lambda = 0.0;
  double n = 1.0;
  double delta = 0.0;
  double truncation = 0.0;
  double distance = 0.0;
  double theta_at = 0.0;
  std::vector<double> abs_diff;  // |phi_hat - phi| per theta grid point
};

struct ConvergenceReport {
  Classification cls;
  StableParams limit_params;  // meaningful for the stable-type limits
  CFCurve limit;
  std::vector<ConvergenceRow> rows;
  std::vector<std::vector<double>> samples;  // normalized replicates per ladder point
  double replicate_radius = 0.0;             // 3/sqrt(replicates)
  double threshold = 0.05;
  bool final_pass = false;
  bool monotone_pass = false;  // decreasing along the ladder up to one inversion
};

struct ConvergenceOptions {
  std::size_t replicates = 1000;
  std::uint64_t seed = 0;
  int threads = 1;
  double threshold = 0.05;
  double fast_path_threshold = 1e4;
  std::vector<double> theta_grid;  // empty -> auto-selected from the limit CF
};

ConvergenceReport run_convergence(const RegimeSpec& spec, const Measure& mu,
                                  const RadiusLaw& f, const WeightLaw& g,
                                  const ConvergenceOptions& opts);

struct FbmReport {
  std::vector<double> t_grid;
  std::vector<double> variances;
  PowerFit fit;  // contract: slope ~ 3 - beta
};

/// Variance growth of the normalized field over mu_t = IntervalLebesgue(t) in
/// the d=1, alpha=2, stable-dependent regime at a fixed small rho.
FbmReport fbm_variance_check(const RadiusLaw& f, const WeightLaw& g, double lambda0,
                             double theta_lambda, double rho,
                             const std::vector<double>& t_grid, std::size_t replicates,
                             std::uint64_t seed, int threads = 1,
                             double fast_path_threshold = 1e4);

}  // namespace ballfields
