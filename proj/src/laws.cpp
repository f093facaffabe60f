#include "ballfields/laws.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ballfields {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_stable(double alpha, double sigma, double b) {
  if (!(alpha > 1.0 && alpha <= 2.0)) throw std::invalid_argument("alpha must lie in (1,2]");
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be nonnegative");
  if (!(b >= -1.0 && b <= 1.0)) throw std::invalid_argument("b must lie in [-1,1]");
}

double stable_tan(double alpha) {
  // tan(pi alpha / 2); exactly 0 at alpha = 2 where the skew term vanishes.
  return alpha == 2.0 ? 0.0 : std::tan(0.5 * M_PI * alpha);
}

}  // namespace

double i_const(double q) {
  if (!(q > 0.0 && q < 2.0)) throw std::invalid_argument("i_const: q must lie in (0,2)");
  if (q == 1.0) return 0.5 * M_PI;
  return std::tgamma(2.0 - q) * std::fabs(std::cos(0.5 * M_PI * q)) /
         (q * std::fabs(q - 1.0));
}

double s_const(double q) {
  if (!(q > 1.0 && q < 2.0)) throw std::invalid_argument("s_const: q must lie in (1,2)");
  return i_const(q) * std::fabs(std::tan(0.5 * M_PI * q));
}

double sample_stable(const StableParams& p, RngStream& rng) {
  validate_stable(p.index, p.scale, p.skew);
  if (p.scale == 0.0) return p.shift;
  if (p.index == 2.0) return p.shift + p.scale * std::sqrt(2.0) * rng.normal();
  const double a = p.index;
  const double tb = p.skew * std::tan(0.5 * M_PI * a);
  const double B = std::atan(tb) / a;
  const double S = std::pow(1.0 + tb * tb, 0.5 / a);
  const double U = M_PI * (rng.uniform01() - 0.5);
  const double W = rng.exponential();
  const double x = S * std::sin(a * (U + B)) / std::pow(std::cos(U), 1.0 / a) *
                   std::pow(std::cos(U - a * (U + B)) / W, (1.0 - a) / a);
  return p.shift + p.scale * x;
}

std::complex<double> stable_cf_value(const StableParams& p, double theta) {
  validate_stable(p.index, p.scale, p.skew);
  const double eps = theta > 0 ? 1.0 : (theta < 0 ? -1.0 : 0.0);
  const double mod = std::pow(p.scale * std::fabs(theta), p.index);
  const std::complex<double> expo(-mod, mod * p.skew * eps * stable_tan(p.index) +
                                            p.shift * theta);
  return std::exp(expo);
}

// --- WeightLaw ---

WeightLaw WeightLaw::point_mass(double m0) {
  if (!std::isfinite(m0)) throw std::invalid_argument("m0 must be finite");
  WeightLaw g;
  g.kind_ = WeightKind::PointMass;
  g.params_ = {m0};
  g.alpha_ = 2.0;
  g.mean_ = m0;
  g.attracting_ = {2.0, std::sqrt(0.5 * m0 * m0), 0.0, 0.0};
  return g;
}

WeightLaw WeightLaw::gaussian(double mean, double variance) {
  if (!(variance > 0.0)) throw std::invalid_argument("variance must be positive");
  WeightLaw g;
  g.kind_ = WeightKind::Gaussian;
  g.params_ = {mean, variance};
  g.alpha_ = 2.0;
  g.mean_ = mean;
  g.attracting_ = {2.0, std::sqrt(0.5 * (variance + mean * mean)), 0.0, 0.0};
  return g;
}

WeightLaw WeightLaw::exact_stable(double alpha, double sigma, double b, double tau) {
  validate_stable(alpha, sigma, b);
  if (!std::isfinite(tau)) throw std::invalid_argument("tau must be finite");
  WeightLaw g;
  g.kind_ = WeightKind::ExactStable;
  g.params_ = {alpha, sigma, b, tau};
  g.alpha_ = alpha;
  g.mean_ = tau;  // alpha > 1, so the mean is the shift
  if (alpha == 2.0)
    g.attracting_ = {2.0, std::sqrt(sigma * sigma + 0.5 * tau * tau), 0.0, 0.0};
  else
    g.attracting_ = {alpha, sigma, b, 0.0};
  return g;
}

WeightLaw WeightLaw::two_sided_pareto(double alpha, double scale, double right_fraction) {
  if (!(alpha > 1.0 && alpha < 2.0)) throw std::invalid_argument("alpha must lie in (1,2)");
  if (!(scale > 0.0)) throw std::invalid_argument("scale must be positive");
  if (!(right_fraction >= 0.0 && right_fraction <= 1.0))
    throw std::invalid_argument("right_fraction must lie in [0,1]");
  WeightLaw g;
  g.kind_ = WeightKind::TwoSidedPareto;
  g.params_ = {alpha, scale, right_fraction};
  g.alpha_ = alpha;
  const double b = 2.0 * right_fraction - 1.0;
  g.mean_ = b * alpha * scale / (alpha - 1.0);
  // Tail-balance constants of the attracting stable law: with tail masses
  // A+ = p s^a, A- = (1-p) s^a, sigma^a = a (A+ + A-) I_a and skew (A+ - A-)/(A+ + A-).
  const double sigma = scale * std::pow(alpha * i_const(alpha), 1.0 / alpha);
  g.attracting_ = {alpha, sigma, b, 0.0};
  g.psi_cache_ = std::make_shared<PsiCache>();
  return g;
}

namespace {

// H(c) = int_0^c Psi(r) r^{-1-alpha} dr with Psi(r) = (cos r - 1) + i(sin r - r),
// alpha in (1,2), by termwise integration of the entire series of Psi. The
// largest term at c = 15 is ~1e4, so double accumulation still keeps ~1e-12.
std::complex<double> psi_head_series(double c, double alpha) {
  std::complex<double> sum{};
  double fact = 1.0;                        // (2k)!
  double cpow = std::pow(c, 2.0 - alpha);   // c^{2k - alpha}
  const double c2 = c * c;
  double sign = -1.0;
  for (int k = 1; k <= 60; ++k) {
    fact *= (2.0 * k - 1.0) * (2.0 * k);
    const double re = sign * cpow / (fact * (2.0 * k - alpha));
    const double im =
        sign * cpow * c / (fact * (2.0 * k + 1.0) * (2.0 * k + 1.0 - alpha));
    sum += std::complex<double>(re, im);
    if (std::fabs(re) + std::fabs(im) < 1e-17 * (1.0 + std::abs(sum))) break;
    cpow *= c2;
    sign = -sign;
  }
  return sum;
}

// int_c^inf Psi(r) r^{-1-alpha} dr for large c, via the asymptotic expansion of
// int_c^inf e^{ir} r^{-s} dr (repeated integration by parts; terms shrink until
// k ~ c, far below 1e-12 for c > 15) minus the exact power-law parts.
std::complex<double> psi_tail_integral(double c, double alpha) {
  const double s = 1.0 + alpha;
  const std::complex<double> i_unit(0.0, 1.0);
  const std::complex<double> eic = std::exp(std::complex<double>(0.0, c));
  std::complex<double> osc{};
  std::complex<double> ik = i_unit;  // i (-i)^k
  double mag = std::pow(c, -s);      // (s)_k c^{-s-k}
  for (int k = 0; k < 40; ++k) {
    osc += ik * mag * eic;
    const double next = mag * (s + k) / c;
    if (next >= mag || next < 1e-18) break;
    ik *= -i_unit;
    mag = next;
  }
  return osc - std::complex<double>(std::pow(c, -alpha) / alpha,
                                    std::pow(c, 1.0 - alpha) / (alpha - 1.0));
}

// Psi_G for the two-sided Pareto: for u > 0,
// W(u) = a s^a u^a int_{su}^inf Psi(r) r^{-1-alpha} dr and
// Psi_G(u) = p W(u) + (1-p) conj(W(u)).
std::complex<double> psi_pareto(double u, double alpha, double scale, double p) {
  if (u == 0.0) return {};
  const double au = std::fabs(u);
  const double c = scale * au;
  std::complex<double> factor;
  if (c <= 15.0) {
    const std::complex<double> full(-i_const(alpha), -s_const(alpha));
    factor = full - psi_head_series(c, alpha);
  } else {
    factor = psi_tail_integral(c, alpha);
  }
  const std::complex<double> w =
      alpha * std::pow(scale, alpha) * std::pow(au, alpha) * factor;
  std::complex<double> v = p * w + (1.0 - p) * std::conj(w);
  return u > 0 ? v : std::conj(v);
}

}  // namespace

std::complex<double> WeightLaw::cf(double theta) const {
  if (!std::isfinite(theta)) throw std::invalid_argument("theta must be finite");
  switch (kind_) {
    case WeightKind::PointMass:
      return std::exp(std::complex<double>(0.0, theta * params_[0]));
    case WeightKind::Gaussian:
      return std::exp(std::complex<double>(-0.5 * params_[1] * theta * theta,
                                           theta * params_[0]));
    case WeightKind::ExactStable:
      return stable_cf_value({params_[0], params_[1], params_[2], params_[3]}, theta);
    case WeightKind::TwoSidedPareto:
      return 1.0 + std::complex<double>(0.0, theta * mean_) + psi(theta);
  }
  return {};
}

std::complex<double> WeightLaw::psi(double u) const {
  if (!std::isfinite(u)) throw std::invalid_argument("u must be finite");
  if (kind_ == WeightKind::TwoSidedPareto) {
    {
      std::lock_guard<std::mutex> lock(psi_cache_->mutex);
      auto it = psi_cache_->values.find(u);
      if (it != psi_cache_->values.end()) return it->second;
    }
    auto v = psi_pareto(u, params_[0], params_[1], params_[2]);
    std::lock_guard<std::mutex> lock(psi_cache_->mutex);
    if (psi_cache_->values.size() < 100000) psi_cache_->values.emplace(u, v);
    return v;
  }
  // cf = exp(z + iy) with y = u mean + skew term; expanding e^{z+iy} - 1 - iu mean
  // via expm1 keeps full precision near u = 0 where the naive difference cancels.
  double z = 0.0;       // log |cf|
  double skew = 0.0;    // y - u mean
  switch (kind_) {
    case WeightKind::PointMass:
      break;
    case WeightKind::Gaussian:
      z = -0.5 * params_[1] * u * u;
      break;
    case WeightKind::ExactStable: {
      const double mod = std::pow(params_[1] * std::fabs(u), params_[0]);
      z = -mod;
      skew = mod * params_[2] * (u > 0 ? 1.0 : -1.0) * stable_tan(params_[0]);
      break;
    }
    case WeightKind::TwoSidedPareto:
      break;  // handled above
  }
  const double y = u * mean_ + skew;
  const double em = std::expm1(z);
  const double sy = std::sin(y);
  const double re = em * std::cos(y) - 2.0 * std::sin(0.5 * y) * std::sin(0.5 * y);
  const double im = sy * em + (sy - y) + skew;
  return {re, im};
}

double WeightLaw::sample(RngStream& rng) const {
  switch (kind_) {
    case WeightKind::PointMass:
      return params_[0];
    case WeightKind::Gaussian:
      return params_[0] + std::sqrt(params_[1]) * rng.normal();
    case WeightKind::ExactStable:
      return sample_stable({params_[0], params_[1], params_[2], params_[3]}, rng);
    case WeightKind::TwoSidedPareto: {
      const double side = rng.uniform01() < params_[2] ? 1.0 : -1.0;
      return side * params_[1] * std::pow(rng.uniform01(), -1.0 / params_[0]);
    }
  }
  return 0.0;
}

namespace {

// E[h(X)] for Gaussian X by quadrature over mean +- 12 sd, split at 0.
template <typename H>
double gaussian_expect(double mean, double variance, H&& h) {
  const double sd = std::sqrt(variance);
  std::vector<double> pts{mean - 12.0 * sd, mean + 12.0 * sd};
  if (pts.front() < 0.0 && pts.back() > 0.0) pts.insert(pts.begin() + 1, 0.0);
  const double norm = 1.0 / (sd * std::sqrt(2.0 * M_PI));
  auto f = [&](double x) {
    const double z = (x - mean) / sd;
    return h(x) * norm * std::exp(-0.5 * z * z);
  };
  return integrate_segments<double>(f, pts, 1e-12, 1e-10).value;
}

// (1/I_q) int_0^inf (1 - Re cf(t)) t^{-1-q} dt = E|X|^q for q in (0,2);
// 1 - Re cf = -Re psi, which stays accurate near t = 0.
double abs_moment_from_cf(const WeightLaw& g, double q) {
  const StableParams& att = g.attracting();
  const double t_scale = att.scale > 0 ? 1.0 / att.scale : 1.0;
  auto integrand = [&](double t) { return -g.psi(t).real(); };
  auto res = log_r_integral<double>(integrand, q, t_scale, 1e-8);
  if (!res.converged) throw QuadratureError("absolute-moment quadrature stalled", res.error);
  return res.value / i_const(q);
}

// (1/S_q) int_0^inf (E[X] t - Im cf(t)) t^{-1-q} dt = E[eps(X)|X|^q], q in (1,2);
// E[X] t - Im cf = -Im psi.
double signed_abs_moment_from_cf(const WeightLaw& g, double q) {
  const StableParams& att = g.attracting();
  const double t_scale = att.scale > 0 ? 1.0 / att.scale : 1.0;
  auto integrand = [&](double t) { return -g.psi(t).imag(); };
  auto res = log_r_integral<double>(integrand, q, t_scale, 1e-8);
  if (!res.converged) throw QuadratureError("signed-moment quadrature stalled", res.error);
  return res.value / s_const(q);
}

}  // namespace

double WeightLaw::abs_mean() const {
  switch (kind_) {
    case WeightKind::PointMass:
      return std::fabs(params_[0]);
    case WeightKind::Gaussian:
      return gaussian_expect(params_[0], params_[1],
                             [](double x) { return std::fabs(x); });
    case WeightKind::ExactStable: {
      const double t_scale = params_[1] > 0 ? 1.0 / params_[1] : 1.0;
      auto integrand = [&](double t) { return -psi(t).real(); };
      auto res = log_r_integral<double>(integrand, 1.0, t_scale, 1e-8);
      if (!res.converged)
        throw QuadratureError("absolute-mean quadrature stalled", res.error);
      return res.value * 2.0 / M_PI;
    }
    case WeightKind::TwoSidedPareto:
      return params_[0] * params_[1] / (params_[0] - 1.0);
  }
  return 0.0;
}

double WeightLaw::abs_moment(double q) const {
  if (!(q > 0.0 && q < alpha_))
    throw std::invalid_argument("moment order must lie in (0, alpha)");
  switch (kind_) {
    case WeightKind::PointMass:
      return std::pow(std::fabs(params_[0]), q);
    case WeightKind::Gaussian:
      return gaussian_expect(params_[0], params_[1],
                             [q](double x) { return std::pow(std::fabs(x), q); });
    case WeightKind::ExactStable:
      return abs_moment_from_cf(*this, q);
    case WeightKind::TwoSidedPareto:
      return params_[0] * std::pow(params_[1], q) / (params_[0] - q);
  }
  return 0.0;
}

double WeightLaw::signed_abs_moment(double q) const {
  if (!(q > 1.0 && q < 2.0 && q < alpha_))
    throw std::invalid_argument("moment order must lie in (1, alpha)");
  switch (kind_) {
    case WeightKind::PointMass: {
      const double m0 = params_[0];
      return (m0 > 0 ? 1.0 : (m0 < 0 ? -1.0 : 0.0)) * std::pow(std::fabs(m0), q);
    }
    case WeightKind::Gaussian:
      return gaussian_expect(params_[0], params_[1], [q](double x) {
        return (x > 0 ? 1.0 : -1.0) * std::pow(std::fabs(x), q);
      });
    case WeightKind::ExactStable:
      return signed_abs_moment_from_cf(*this, q);
    case WeightKind::TwoSidedPareto:
      return (2.0 * params_[2] - 1.0) * params_[0] * std::pow(params_[1], q) /
             (params_[0] - q);
  }
  return 0.0;
}

std::complex<double> small_theta_equivalent(const WeightLaw& g, double theta) {
  const StableParams& a = g.attracting();
  if (theta == 0.0) return {};
  const double eps = theta > 0 ? 1.0 : -1.0;
  const double mod = std::pow(a.scale * std::fabs(theta), a.index);
  return std::complex<double>(-mod, mod * a.skew * eps * stable_tan(a.index));
}

TruncatedMomentSlopes truncated_moment_check(const WeightLaw& g,
                                             const std::vector<double>& x_grid,
                                             std::size_t n_samples, RngStream& rng) {
  if (g.alpha() >= 2.0)
    throw std::invalid_argument("truncated_moment_check requires a heavy-tailed law");
  if (x_grid.size() < 5) throw std::invalid_argument("x grid needs at least 5 points");
  std::vector<double> grid = x_grid;
  std::sort(grid.begin(), grid.end());
  if (!(grid.back() >= 100.0 * grid.front()))
    throw std::invalid_argument("x grid must span at least two decades");
  const std::size_t k = grid.size();
  // One pass: bin each |m| into the grid intervals, then prefix-sum.
  std::vector<double> bin_abs(k + 1, 0.0), bin_sq(k + 1, 0.0);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double m = g.sample(rng);
    const double am = std::fabs(m);
    const std::size_t idx =
        std::upper_bound(grid.begin(), grid.end(), am) - grid.begin();
    bin_abs[idx] += am;
    bin_sq[idx] += m * m;
  }
  TruncatedMomentSlopes out;
  out.x_grid = grid;
  out.tail_abs.resize(k);
  out.center_sq.resize(k);
  const double n = static_cast<double>(n_samples);
  for (std::size_t j = 0; j < k; ++j) {
    double tail = 0.0, center = 0.0;
    for (std::size_t b = j + 1; b <= k; ++b) tail += bin_abs[b];
    for (std::size_t b = 0; b <= j; ++b) center += bin_sq[b];
    out.tail_abs[j] = tail / n;
    out.center_sq[j] = center / n;
    if (out.tail_abs[j] <= 0.0)
      throw std::runtime_error("insufficient samples for the tail estimate");
  }
  out.s1 = power_fit(grid, out.tail_abs).slope;
  out.s2 = power_fit(grid, out.center_sq).slope;
  return out;
}

// --- RadiusLaw ---

RadiusLaw RadiusLaw::pareto_tail(double beta, double r_min) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (!(r_min > 0.0)) throw std::invalid_argument("r_min must be positive");
  RadiusLaw f;
  f.kind_ = RadiusKind::ParetoTail;
  f.beta_ = beta;
  f.edge_ = r_min;
  return f;
}

RadiusLaw RadiusLaw::small_power(double beta, double r_max, double c_beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (!(r_max > 0.0)) throw std::invalid_argument("r_max must be positive");
  if (!(c_beta > 0.0)) throw std::invalid_argument("c_beta must be positive");
  RadiusLaw f;
  f.kind_ = RadiusKind::SmallPower;
  f.beta_ = beta;
  f.edge_ = r_max;
  f.c_ = c_beta;
  return f;
}

double RadiusLaw::c_beta() const {
  return kind_ == RadiusKind::ParetoTail ? beta_ * std::pow(edge_, beta_) : c_;
}

double RadiusLaw::density(double r) const {
  if (kind_ == RadiusKind::ParetoTail)
    return r > edge_ ? c_beta() * std::pow(r, -1.0 - beta_) : 0.0;
  return (r > 0.0 && r <= edge_) ? c_ * std::pow(r, -1.0 - beta_) : 0.0;
}

double RadiusLaw::moment_between(double k, double lo, double hi) const {
  if (!(hi >= lo)) throw std::invalid_argument("moment_between: hi < lo");
  const double e = k - beta_;
  if (kind_ == RadiusKind::ParetoTail) {
    const double a = std::max(lo, edge_);
    if (hi <= a) return 0.0;
    const double c = c_beta();
    if (hi == kInf) {
      if (e >= 0.0) throw std::invalid_argument("divergent radius moment: k >= beta");
      return c * std::pow(a, e) / (-e);
    }
    if (e == 0.0) return c * std::log(hi / a);
    return c * (std::pow(hi, e) - std::pow(a, e)) / e;
  }
  const double a = std::max(lo, 0.0);
  const double b = std::min(hi, edge_);
  if (b <= a) return 0.0;
  if (e == 0.0) {
    if (a == 0.0) throw std::invalid_argument("divergent radius moment: k = beta at 0");
    return c_ * std::log(b / a);
  }
  if (e < 0.0 && a == 0.0)
    throw std::invalid_argument("divergent radius moment: k < beta at 0");
  return c_ * (std::pow(b, e) - (a == 0.0 ? 0.0 : std::pow(a, e))) / e;
}

double RadiusLaw::moment(double k) const {
  return kind_ == RadiusKind::ParetoTail ? moment_between(k, edge_, kInf)
                                         : moment_between(k, 0.0, edge_);
}

double RadiusLaw::mass_above(double delta) const {
  return moment_between(0.0, delta, kInf);
}

RadiusLaw RadiusLaw::rescaled(double rho) const {
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
  if (kind_ == RadiusKind::ParetoTail) return pareto_tail(beta_, rho * edge_);
  return small_power(beta_, rho * edge_, c_ * std::pow(rho, beta_));
}

double RadiusLaw::sample_size_biased(double k, double delta, RngStream& rng) const {
  const double e = k - beta_;
  const double u = rng.uniform01();
  if (kind_ == RadiusKind::ParetoTail) {
    if (e >= 0.0) throw std::invalid_argument("size-biased draw needs k < beta");
    const double lo = std::max(delta, edge_);
    return lo * std::pow(u, 1.0 / e);
  }
  const double lo = delta, hi = edge_;
  if (!(lo < hi)) throw std::invalid_argument("size-biased draw: empty radius range");
  if (e <= 0.0 && lo <= 0.0)
    throw std::invalid_argument("size-biased draw needs delta > 0 when k <= beta");
  if (e == 0.0) return lo * std::pow(hi / lo, u);
  const double plo = lo > 0.0 ? std::pow(lo, e) : 0.0;
  return std::pow(plo + u * (std::pow(hi, e) - plo), 1.0 / e);
}

double mean_field(double lambda, const RadiusLaw& f, const WeightLaw& g,
                  const Measure& mu) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be nonnegative");
  const int d = mu.dim();
  return lambda * unit_ball_volume(d) * g.mean() * f.moment(static_cast<double>(d)) *
         mu.total_mass();
}

std::vector<double> bek_ratios(const RadiusLaw& f, const std::vector<double>& rho_ladder,
                               double p_prime, double q_prime) {
  if (!(p_prime < f.beta() && f.beta() < q_prime))
    throw std::invalid_argument("exponents must sandwich beta: p' < beta < q'");
  const double ref_unit =
      1.0 / (q_prime - f.beta()) + 1.0 / (f.beta() - p_prime);
  std::vector<double> out;
  out.reserve(rho_ladder.size());
  for (double rho : rho_ladder) {
    const RadiusLaw fr = f.rescaled(rho);
    const double num = fr.moment_between(q_prime, 0.0, 1.0) +
                       fr.moment_between(p_prime, 1.0, kInf);
    out.push_back(num / (f.c_beta() * std::pow(rho, f.beta()) * ref_unit));
  }
  return out;
}

}  // namespace ballfields
