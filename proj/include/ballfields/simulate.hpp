#pragma once

#include <cstdint>
#include <vector>

#include "ballfields/laws.hpp"
#include "ballfields/measures.hpp"
#include "ballfields/rng.hpp"

namespace ballfields {

/// One realized Poisson ball configuration restricted to the window of a
/// measure (centers in K + [-r, r]^d).
struct BallSample {
  std::vector<Point> x;
  std::vector<double> r;
  std::vector<double> m;
  Box window;
  double lambda = 0.0;
  double delta = 0.0;  // radius truncation, 0 when exact
  std::uint64_t stream = 0;

  std::size_t size() const { return x.size(); }
};

struct ResourceGuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Expected number of balls hitting the enlarged window:
/// Lambda = lambda * int_{r >= delta} prod_i (s_i + 2r) F(dr).
double expected_count(double lambda, const RadiusLaw& f_rho, const Box& window,
                      double delta);

/// Exact draw of the configuration; radii from the closed-form size-biased
/// mixture, centers uniform on K + [-r, r]^d, marks i.i.d. from G.
BallSample sample_balls(double lambda, const RadiusLaw& f_rho, const WeightLaw& g,
                        const Box& window, double delta, RngStream& rng,
                        std::uint64_t stream_id = 0);

/// M(mu) = sum_j m_j mu(B(x_j, r_j)).
double evaluate_M(const Measure& mu, const BallSample& sample);

/// Upper bound lambda E|m| ||mu|| c_d int_{r < delta} r^d F_rho(dr) on the
/// expected absolute contribution of discarded balls.
double truncation_bound(double lambda, const RadiusLaw& f_rho, const WeightLaw& g,
                        const Measure& mu, double delta);

/// Smallest delta meeting truncation_bound <= target (0 for finite measures).
double choose_truncation(double lambda, const RadiusLaw& f_rho, const WeightLaw& g,
                         const Measure& mu, double target);

struct ReplicateOptions {
  std::size_t count = 0;
  std::uint64_t seed = 0;
  /// First per-replicate stream id; replicate i uses stream stream_base + i.
  std::uint64_t stream_base = 1;
  int threads = 1;
  /// Expected ball count above which the conditional reductions kick in.
  double fast_path_threshold = 1e4;
  /// Expected number of exactly enumerated large balls under a fast path.
  double large_ball_target = 3000.0;
};

/// count i.i.d. draws of (M(mu) - E[M(mu)]) / n at intensity lambda and radius
/// law f_rho (already rescaled), truncated at delta. Centering uses the
/// truncated model's own mean. Deterministic for fixed (seed, count),
/// independent of the thread count.
std::vector<double> replicate(const Measure& mu, double lambda, const RadiusLaw& f_rho,
                              const WeightLaw& g, double n, double delta,
                              const ReplicateOptions& opts);

}  // namespace ballfields
