#include "ballfields/limits.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ballfields {

namespace {

double sgn(double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }

double radius_scale(const Measure& mu) {
  const double d = mu.support().diameter();
  return d > 0.0 ? d : 1.0;
}

// iint f(mu(B(x,r))) r^{-1-beta} dr dx with f packing two reals as a complex.
template <typename F>
QuadResult<std::complex<double>> exponent_integral(const Measure& mu, double beta,
                                                   F&& f, double rel_tol) {
  auto g = [&](double r) {
    return ball_mass_x_integral<std::complex<double>>(mu, r, f, 0.1 * rel_tol).value;
  };
  return log_r_integral<std::complex<double>>(g, beta, radius_scale(mu), rel_tol);
}

}  // namespace

StableParams z_alpha_params(const Measure& mu, double alpha, double beta, double c_beta,
                            double sigma, double b) {
  if (!(alpha > 1.0 && alpha <= 2.0)) throw std::invalid_argument("alpha must lie in (1,2]");
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be nonnegative");
  if (!(b >= -1.0 && b <= 1.0)) throw std::invalid_argument("b must lie in [-1,1]");
  auto res = exponent_integral(
      mu, beta,
      [alpha](double v) {
        const double p = std::pow(std::fabs(v), alpha);
        return std::complex<double>(p, sgn(v) * p);
      },
      1e-5);
  if (!res.converged)
    throw QuadratureError("control-measure integral did not converge", res.error);
  const double num_abs = res.value.real();
  const double num_sign = res.value.imag();
  if (!(num_abs > 0.0)) return {alpha, 0.0, 0.0, 0.0};
  StableParams p;
  p.index = alpha;
  p.scale = std::pow(std::pow(sigma, alpha) * c_beta * num_abs, 1.0 / alpha);
  p.skew = alpha == 2.0 ? 0.0 : b * num_sign / num_abs;
  p.shift = 0.0;
  return p;
}

std::complex<double> j_exponent(const Measure& mu, double a, const WeightLaw& g,
                                double beta, double c_beta, double theta) {
  if (!(a > 0.0)) throw std::invalid_argument("a must be positive");
  if (theta == 0.0) return {};
  auto res = exponent_integral(
      mu, beta, [&](double v) { return g.psi(theta * v); }, 1e-5);
  if (!res.converged)
    throw QuadratureError("Poisson exponent integral did not converge", res.error);
  return c_beta * std::pow(a, mu.dim() - beta) * res.value;
}

CFCurve j_cf(const Measure& mu, double a, const WeightLaw& g, double beta, double c_beta,
             const std::vector<double>& theta_grid) {
  // Existence reduces to the finiteness of iint |mu(B)|^alpha r^{-1-beta}
  // via the truncated-moment bounds; checked here by quadrature.
  const double alpha = g.alpha();
  auto bound = exponent_integral(
      mu, beta,
      [alpha](double v) {
        return std::complex<double>(std::pow(std::fabs(v), alpha), 0.0);
      },
      1e-4);
  if (!bound.converged || !std::isfinite(bound.value.real()))
    throw QuadratureError("Poisson integral existence check failed", bound.error);
  CFCurve curve;
  curve.method = "quadrature";
  curve.theta = theta_grid;
  curve.value.reserve(theta_grid.size());
  curve.error.reserve(theta_grid.size());
  for (double theta : theta_grid) {
    if (theta == 0.0) {
      curve.value.push_back(1.0);
      curve.error.push_back(0.0);
      continue;
    }
    auto res = exponent_integral(
        mu, beta, [&](double v) { return g.psi(theta * v); }, 1e-5);
    if (!res.converged)
      throw QuadratureError("Poisson exponent integral did not converge", res.error);
    const std::complex<double> expo =
        c_beta * std::pow(a, mu.dim() - beta) * res.value;
    const std::complex<double> cf = std::exp(expo);
    curve.value.push_back(cf);
    curve.error.push_back(std::abs(cf) * c_beta * std::pow(a, mu.dim() - beta) *
                          res.error);
  }
  return curve;
}

std::vector<double> zj_bridge(const Measure& mu, const WeightLaw& g, double beta,
                              double c_beta, const std::vector<double>& a_ladder,
                              const std::vector<double>& theta_grid) {
  const StableParams& att = g.attracting();
  const StableParams zp =
      z_alpha_params(mu, att.index, beta, c_beta, att.scale, att.skew);
  const double d = mu.dim();
  const double h = (d - beta) / att.index;  // self-similarity index H
  std::vector<double> out;
  out.reserve(a_ladder.size());
  for (double a : a_ladder) {
    if (!(a > 0.0)) throw std::invalid_argument("a must be positive");
    double dist = 0.0;
    for (double theta : theta_grid) {
      std::complex<double> cf_j = 1.0;
      if (theta != 0.0) {
        auto res = exponent_integral(
            mu, beta,
            [&](double v) { return g.psi(theta * std::pow(a, -h) * v); }, 1e-5);
        if (!res.converged)
          throw QuadratureError("Poisson exponent integral did not converge", res.error);
        cf_j = std::exp(c_beta * std::pow(a, d - beta) * res.value);
      }
      dist = std::max(dist, std::abs(cf_j - stable_cf_value(zp, theta)));
    }
    out.push_back(dist);
  }
  return out;
}

std::pair<double, double> density_power_integrals(const Measure& mu, double q) {
  if (!mu.absolutely_continuous())
    throw std::invalid_argument("measure must be absolutely continuous");
  auto f = [&, q](const Point& x) {
    const double v = mu.density(x);
    const double p = std::pow(std::fabs(v), q);
    return std::complex<double>(p, sgn(v) * p);
  };
  const int d = mu.dim();
  std::complex<double> val;
  if (d == 1) {
    auto pts = mu.density_breakpoints();
    auto g = [&](double x) { return f(make_point(x)); };
    val = integrate_segments<std::complex<double>>(g, pts, 1e-12, 1e-8).value;
  } else {
    const Box w = mu.support();
    if (d == 2) {
      auto outer = [&](double x0) {
        auto inner = [&](double x1) { return f(make_point(x0, x1)); };
        return integrate<std::complex<double>>(inner, w.lo[1], w.hi[1], 0.0, 1e-8).value;
      };
      val = integrate<std::complex<double>>(outer, w.lo[0], w.hi[0], 0.0, 1e-7).value;
    } else {
      auto outer = [&](double x0) {
        auto mid = [&](double x1) {
          auto inner = [&](double x2) { return f(make_point(x0, x1, x2)); };
          return integrate<std::complex<double>>(inner, w.lo[2], w.hi[2], 0.0, 1e-8)
              .value;
        };
        return integrate<std::complex<double>>(mid, w.lo[1], w.hi[1], 0.0, 1e-8).value;
      };
      val = integrate<std::complex<double>>(outer, w.lo[0], w.hi[0], 0.0, 1e-7).value;
    }
  }
  return {val.real(), val.imag()};
}

double gamma_mark_skew(const WeightLaw& g, double gamma) {
  return g.signed_abs_moment(gamma) / g.abs_moment(gamma);
}

StableParams z_tilde_gamma_params(const Measure& mu, double beta, double alpha,
                                  double c_beta, const WeightLaw& g) {
  const int d = mu.dim();
  if (!(beta > d && beta < alpha * d))
    throw std::invalid_argument("beta must lie in (d, alpha d)");
  const double gamma = beta / d;
  const double mark_abs = g.abs_moment(gamma);
  const double sigma_g =
      std::pow(unit_ball_volume(d), gamma) * c_beta / d * i_const(gamma) * mark_abs;
  auto [p_abs, p_sign] = density_power_integrals(mu, gamma);
  StableParams p;
  p.index = gamma;
  p.scale = std::pow(sigma_g * p_abs, 1.0 / gamma);
  p.skew = p_abs > 0.0 ? gamma_mark_skew(g, gamma) * p_sign / p_abs : 0.0;
  p.shift = 0.0;
  return p;
}

StableParams z_tilde_alpha_params(const Measure& mu, const RadiusLaw& f,
                                  const WeightLaw& g) {
  const int d = mu.dim();
  const double alpha = g.alpha();
  if (!(f.beta() > alpha * d))
    throw std::invalid_argument("beta must exceed alpha d");
  const double rad = f.moment(alpha * d);  // throws when divergent
  const StableParams& att = g.attracting();
  auto [p_abs, p_sign] = density_power_integrals(mu, alpha);
  StableParams p;
  p.index = alpha;
  p.scale = att.scale * unit_ball_volume(d) * std::pow(rad * p_abs, 1.0 / alpha);
  p.skew = (alpha == 2.0 || p_abs <= 0.0) ? 0.0 : att.skew * p_sign / p_abs;
  p.shift = 0.0;
  return p;
}

namespace {

// iint f(mu1(B), mu2(B)) r^{-1-beta} dr dx over the union window.
template <typename F>
QuadResult<double> pair_exponent_integral(const Measure& mu1, const Measure& mu2,
                                          double beta, F&& f, double rel_tol) {
  if (mu1.dim() != mu2.dim()) throw std::invalid_argument("dimension mismatch");
  const int d = mu1.dim();
  Box sup = mu1.support();
  sup.absorb(mu2.support());
  auto xint = [&](double r) {
    if (d == 1) {
      auto p1 = mu1.ball_mass_breakpoints(r);
      auto p2 = mu2.ball_mass_breakpoints(r);
      std::vector<double> pts;
      pts.reserve(p1.size() + p2.size());
      std::merge(p1.begin(), p1.end(), p2.begin(), p2.end(), std::back_inserter(pts));
      pts.erase(std::unique(pts.begin(), pts.end(),
                            [](double a, double b) { return std::fabs(a - b) < 1e-14; }),
                pts.end());
      auto h = [&](double x) {
        const Point p = make_point(x);
        return f(mu1.ball_mass(p, r), mu2.ball_mass(p, r));
      };
      return integrate_segments<double>(h, pts, 0.0, 0.1 * rel_tol).value;
    }
    const Box w = sup.enlarged(r);
    auto outer = [&](double x0) {
      auto inner = [&](double x1) {
        const Point p = make_point(x0, x1);
        return f(mu1.ball_mass(p, r), mu2.ball_mass(p, r));
      };
      return integrate<double>(inner, w.lo[1], w.hi[1], 0.0, 0.02 * rel_tol).value;
    };
    return integrate<double>(outer, w.lo[0], w.hi[0], 0.0, 0.1 * rel_tol).value;
  };
  double scale = sup.diameter();
  if (scale <= 0.0) scale = 1.0;
  return log_r_integral<double>(xint, beta, scale, rel_tol);
}

}  // namespace

double covariation(const Measure& mu1, const Measure& mu2, double alpha, double beta,
                   double c_beta, double sigma) {
  if (!(alpha > 1.0 && alpha <= 2.0)) throw std::invalid_argument("alpha must lie in (1,2]");
  auto res = pair_exponent_integral(
      mu1, mu2, beta,
      [alpha](double v1, double v2) {
        return v1 * sgn(v2) * std::pow(std::fabs(v2), alpha - 1.0);
      },
      1e-5);
  if (!res.converged)
    throw QuadratureError("covariation integral did not converge", res.error);
  return std::pow(sigma, alpha) * c_beta * res.value;
}

CFCurve stable_cf(const StableParams& p, const std::vector<double>& theta_grid) {
  CFCurve curve;
  curve.method = "closed-form";
  curve.theta = theta_grid;
  curve.value.reserve(theta_grid.size());
  curve.error.assign(theta_grid.size(), 0.0);
  for (double theta : theta_grid) curve.value.push_back(stable_cf_value(p, theta));
  return curve;
}

std::vector<double> select_theta_grid(const std::function<double(double)>& cf_modulus,
                                      int points) {
  if (points < 3 || points % 2 == 0)
    throw std::invalid_argument("theta grid needs an odd point count >= 3");
  double hi = 1.0;
  int guard = 0;
  while (cf_modulus(hi) > 0.2 && guard++ < 200) hi *= 2.0;
  double lo = 0.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (cf_modulus(mid) > 0.2 ? lo : hi) = mid;
  }
  const double star = 0.5 * (lo + hi);
  std::vector<double> grid(points);
  const int half = points / 2;
  for (int i = 0; i < points; ++i)
    grid[i] = star * static_cast<double>(i - half) / static_cast<double>(half);
  grid[half] = 0.0;
  return grid;
}

}  // namespace ballfields
