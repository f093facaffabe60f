#include "ballfields/simulate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace ballfields {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCountGuard = 1e9;

// Elementary symmetric polynomials e_0..e_d of the window side lengths, so
// that prod_i (s_i + 2r) = sum_k e_k (2r)^k.
std::vector<double> side_elementary_symmetric(const Box& window) {
  std::vector<double> e{1.0};
  for (int i = 0; i < window.dim; ++i) {
    e.push_back(0.0);
    for (std::size_t k = e.size() - 1; k > 0; --k) e[k] += window.side(i) * e[k - 1];
  }
  return e;
}

std::vector<double> mixture_weights(double lambda, const RadiusLaw& f_rho,
                                    const Box& window, double delta) {
  if (f_rho.kind() == RadiusKind::SmallPower && !(delta > 0.0))
    throw std::invalid_argument("zoom-in radius law requires delta > 0");
  // prod_i (s_i + 2r) = sum_k e_{d-k} (2r)^k.
  const auto e = side_elementary_symmetric(window);
  std::vector<double> w(e.size());
  for (std::size_t k = 0; k < e.size(); ++k)
    w[k] = lambda * std::pow(2.0, static_cast<double>(k)) * e[e.size() - 1 - k] *
           f_rho.moment_between(static_cast<double>(k), delta, kInf);
  return w;
}

double large_ball_count(double lambda, const RadiusLaw& f_rho, const Box& window,
                        double r0) {
  const auto e = side_elementary_symmetric(window);
  double total = 0.0;
  for (std::size_t k = 0; k < e.size(); ++k)
    total += lambda * std::pow(2.0, static_cast<double>(k)) * e[e.size() - 1 - k] *
             f_rho.moment_between(static_cast<double>(k), r0, kInf);
  return total;
}

}  // namespace

double expected_count(double lambda, const RadiusLaw& f_rho, const Box& window,
                      double delta) {
  const auto w = mixture_weights(lambda, f_rho, window, delta);
  double total = 0.0;
  for (double v : w) total += v;
  return total;
}

BallSample sample_balls(double lambda, const RadiusLaw& f_rho, const WeightLaw& g,
                        const Box& window, double delta, RngStream& rng,
                        std::uint64_t stream_id) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be nonnegative");
  if (!(delta >= 0.0)) throw std::invalid_argument("delta must be nonnegative");
  const auto w = mixture_weights(lambda, f_rho, window, delta);
  double total = 0.0;
  for (double v : w) total += v;
  if (!(total < kCountGuard)) {
    std::ostringstream msg;
    msg << "expected ball count " << total << " exceeds the 1e9 guard at lambda="
        << lambda;
    throw ResourceGuardError(msg.str());
  }
  BallSample s;
  s.window = window;
  s.lambda = lambda;
  s.delta = delta;
  s.stream = stream_id;
  const std::uint64_t n = total > 0.0 ? rng.poisson(total) : 0;
  s.x.reserve(n);
  s.r.reserve(n);
  s.m.reserve(n);
  for (std::uint64_t j = 0; j < n; ++j) {
    double pick = rng.uniform01() * total;
    std::size_t k = 0;
    while (k + 1 < w.size() && pick > w[k]) {
      pick -= w[k];
      ++k;
    }
    const double r = f_rho.sample_size_biased(static_cast<double>(k), delta, rng);
    Point x{};
    for (int i = 0; i < window.dim; ++i)
      x[i] = rng.uniform(window.lo[i] - r, window.hi[i] + r);
    s.x.push_back(x);
    s.r.push_back(r);
    s.m.push_back(g.sample(rng));
  }
  return s;
}

double evaluate_M(const Measure& mu, const BallSample& sample) {
  if (mu.dim() != sample.window.dim)
    throw std::invalid_argument("measure and sample dimensions differ");
  double total = 0.0;
  for (std::size_t j = 0; j < sample.size(); ++j)
    total += sample.m[j] * mu.ball_mass(sample.x[j], sample.r[j]);
  return total;
}

double truncation_bound(double lambda, const RadiusLaw& f_rho, const WeightLaw& g,
                        const Measure& mu, double delta) {
  if (delta <= 0.0) return 0.0;
  const int d = mu.dim();
  return lambda * g.abs_mean() * mu.total_variation() * unit_ball_volume(d) *
         f_rho.moment_between(static_cast<double>(d), 0.0, delta);
}

double choose_truncation(double lambda, const RadiusLaw& f_rho, const WeightLaw& g,
                         const Measure& mu, double target) {
  if (!(target > 0.0)) throw std::invalid_argument("truncation target must be positive");
  if (f_rho.kind() == RadiusKind::ParetoTail) return 0.0;
  const int d = mu.dim();
  const double a =
      lambda * g.abs_mean() * mu.total_variation() * unit_ball_volume(d) * f_rho.c_beta();
  if (a <= 0.0) return 0.0;
  // bound(delta) = a delta^{d-beta} / (d - beta) for the zoom-in power density.
  const double e = static_cast<double>(d) - f_rho.beta();
  const double delta = std::pow(target * e / a, 1.0 / e);
  return std::min(delta, 0.5 * f_rho.r_max());
}

namespace {

enum class Path { Naive, ConditionalStable, ConditionalGaussian };

struct FastPathData {
  double r0 = 0.0;
  // Conditional-stable path: small-ball moments of (sum |g|^a, sum eps(g)|g|^a).
  double mean_abs = 0.0, mean_sign = 0.0, var = 0.0, cov = 0.0;
  // Conditional-Gaussian path: small-ball mean and variance of M itself.
  double small_mean = 0.0, small_var = 0.0;
};

// int over r in (lo, hi) of (x-integral of f(mu(B(x,r)))) against F(dr),
// via u = log r; returns the complex pair packed by f.
template <typename F>
std::complex<double> radius_window_integral(const Measure& mu, const RadiusLaw& f_rho,
                                            double lo, double hi, F&& f) {
  if (!(hi > lo)) return {};
  auto integrand = [&](double u) {
    const double r = std::exp(u);
    return ball_mass_x_integral<std::complex<double>>(mu, r, f, 1e-7).value *
           f_rho.density(r) * r;
  };
  return integrate<std::complex<double>>(integrand, std::log(lo), std::log(hi), 0.0, 1e-6)
      .value;
}

double small_radius_floor(const RadiusLaw& f_rho, double delta) {
  return f_rho.kind() == RadiusKind::ParetoTail ? std::max(delta, f_rho.r_min()) : delta;
}

FastPathData prepare_fast_path(Path path, const Measure& mu, double lambda,
                               const RadiusLaw& f_rho, const WeightLaw& g, double delta,
                               double total_count, const ReplicateOptions& opts) {
  FastPathData fp;
  // Pick r0 so that about large_ball_target balls get exact treatment.
  const double lo = small_radius_floor(f_rho, delta);
  double a = std::log(lo), b = a;
  while (large_ball_count(lambda, f_rho, mu.support(), std::exp(b)) >
         opts.large_ball_target)
    b += 1.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (a + b);
    if (large_ball_count(lambda, f_rho, mu.support(), std::exp(mid)) >
        opts.large_ball_target)
      a = mid;
    else
      b = mid;
  }
  fp.r0 = std::exp(0.5 * (a + b));
  (void)total_count;
  if (path == Path::ConditionalStable) {
    const double al = g.alpha();
    auto first = radius_window_integral(
        mu, f_rho, lo, fp.r0, [al](double v) {
          const double p = std::pow(std::fabs(v), al);
          return std::complex<double>(p, v >= 0 ? p : -p);
        });
    auto second = radius_window_integral(
        mu, f_rho, lo, fp.r0, [al](double v) {
          const double p = std::pow(std::fabs(v), 2.0 * al);
          return std::complex<double>(p, v >= 0 ? p : -p);
        });
    fp.mean_abs = lambda * first.real();
    fp.mean_sign = lambda * first.imag();
    fp.var = lambda * second.real();
    fp.cov = lambda * second.imag();
  } else {
    auto both = radius_window_integral(mu, f_rho, lo, fp.r0, [](double v) {
      return std::complex<double>(v, v * v);
    });
    fp.small_mean = lambda * g.mean() * both.real();
    const double m2 = g.kind() == WeightKind::PointMass
                          ? g.params()[0] * g.params()[0]
                          : g.params()[1] + g.params()[0] * g.params()[0];
    fp.small_var = lambda * m2 * both.imag();
  }
  return fp;
}

double one_replicate(Path path, const Measure& mu, double lambda,
                     const RadiusLaw& f_rho, const WeightLaw& g, double delta,
                     double centered_mean, const FastPathData& fp, RngStream& rng,
                     std::uint64_t stream_id) {
  switch (path) {
    case Path::Naive: {
      const BallSample s = sample_balls(lambda, f_rho, g, mu.support(), delta, rng,
                                        stream_id);
      return evaluate_M(mu, s) - centered_mean;
    }
    case Path::ConditionalStable: {
      // Small balls: Gaussian surrogate for (sum |g|^a, sum eps(g)|g|^a).
      double ta = fp.mean_abs, ts = fp.mean_sign;
      if (fp.var > 0.0) {
        const double z1 = rng.normal(), z2 = rng.normal();
        const double sd = std::sqrt(fp.var);
        const double c = fp.cov / sd;
        const double res = std::sqrt(std::max(fp.var - c * c, 0.0));
        ta += sd * z1;
        ts += c * z1 + res * z2;
      }
      // Large balls: exact enumeration (marks fold into the stable draw).
      const BallSample s =
          sample_balls(lambda, f_rho, g, mu.support(), fp.r0, rng, stream_id);
      const double al = g.alpha();
      for (std::size_t j = 0; j < s.size(); ++j) {
        const double v = mu.ball_mass(s.x[j], s.r[j]);
        const double p = std::pow(std::fabs(v), al);
        ta += p;
        ts += v >= 0 ? p : -p;
      }
      if (!(ta > 0.0)) return 0.0;
      const StableParams& att = g.attracting();
      const double skew = std::clamp(att.skew * ts / ta, -1.0, 1.0);
      return sample_stable({al, att.scale * std::pow(ta, 1.0 / al), skew, 0.0}, rng);
    }
    case Path::ConditionalGaussian: {
      double total = fp.small_mean + std::sqrt(std::max(fp.small_var, 0.0)) * rng.normal();
      const BallSample s =
          sample_balls(lambda, f_rho, g, mu.support(), fp.r0, rng, stream_id);
      total += evaluate_M(mu, s);
      return total - centered_mean;
    }
  }
  return 0.0;
}

}  // namespace

std::vector<double> replicate(const Measure& mu, double lambda, const RadiusLaw& f_rho,
                              const WeightLaw& g, double n, double delta,
                              const ReplicateOptions& opts) {
  if (!(n > 0.0)) throw std::invalid_argument("normalization must be positive");
  const double total_count = expected_count(lambda, f_rho, mu.support(), delta);
  if (!(total_count < kCountGuard)) {
    std::ostringstream msg;
    msg << "expected ball count " << total_count << " exceeds the 1e9 guard at lambda="
        << lambda;
    throw ResourceGuardError(msg.str());
  }

  Path path = Path::Naive;
  if (total_count > opts.fast_path_threshold &&
      total_count > 4.0 * opts.large_ball_target) {
    if (g.kind() == WeightKind::ExactStable && g.mean() == 0.0)
      path = Path::ConditionalStable;
    else if (g.kind() == WeightKind::PointMass || g.kind() == WeightKind::Gaussian)
      path = Path::ConditionalGaussian;
  }

  FastPathData fp;
  if (path != Path::Naive)
    fp = prepare_fast_path(path, mu, lambda, f_rho, g, delta, total_count, opts);

  // Mean of the delta-truncated model; exact centering for what is simulated.
  const double centered_mean =
      lambda * g.mean() * unit_ball_volume(mu.dim()) *
      f_rho.moment_between(static_cast<double>(mu.dim()), delta,
                           std::numeric_limits<double>::infinity()) *
      mu.total_mass();

  std::vector<double> out(opts.count);
  const int workers = std::max(1, opts.threads);
  auto run_chunk = [&](int t) {
    for (std::size_t i = t; i < opts.count; i += workers) {
      RngStream rng(opts.seed, opts.stream_base + i);
      out[i] = one_replicate(path, mu, lambda, f_rho, g, delta, centered_mean, fp, rng,
                             opts.stream_base + i) /
               n;
    }
  };
  if (workers == 1) {
    run_chunk(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(run_chunk, t);
    for (auto& th : pool) th.join();
  }
  return out;
}

}  // namespace ballfields
