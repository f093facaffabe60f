#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ballfields {

namespace detail {

// Gauss-Kronrod 15/7 nodes and weights on [-1, 1] (QUADPACK values).
inline constexpr double kGK15Nodes[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0,
    0.207784955007898,  0.405845151377397,  0.586087235467691,
    0.741531185599394,  0.864864423359769,  0.949107912342759,
    0.991455371120813};

inline constexpr double kGK15Weights[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267,
    0.140653259715525, 0.104790010322250, 0.063092092629979,
    0.022935322010529};

// Embedded 7-point Gauss weights, aligned with the odd Kronrod nodes.
inline constexpr double kG7Weights[7] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870};

inline double abs_val(double x) { return std::fabs(x); }
inline double abs_val(const std::complex<double>& x) { return std::abs(x); }

}  // namespace detail

template <typename T>
struct QuadResult {
  T value{};
  double error = 0.0;
  std::size_t evals = 0;
  bool converged = true;
};

/// One Gauss-Kronrod 15/7 panel on [a, b]; error = |K15 - G7|.
template <typename T, typename F>
QuadResult<T> gk15_panel(F&& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  T kres{};
  T gres{};
  for (int i = 0; i < 15; ++i) {
    const T v = f(c + h * detail::kGK15Nodes[i]);
    kres += detail::kGK15Weights[i] * v;
    if (i % 2 == 1) gres += detail::kG7Weights[i / 2] * v;
  }
  QuadResult<T> out;
  out.value = h * kres;
  out.error = detail::abs_val(h * (kres - gres));
  out.evals = 15;
  return out;
}

namespace detail {

template <typename T, typename F>
void adapt_rec(F&& f, double a, double b, double tol, int depth, QuadResult<T>& acc) {
  auto panel = gk15_panel<T>(f, a, b);
  acc.evals += panel.evals;
  // Give up on a panel once the budget is spent: tolerances below the noise
  // floor of the error estimate would otherwise blow the tree up.
  const bool budget_spent = acc.evals > 5'000'000;
  if (panel.error <= tol || depth >= 48 || budget_spent ||
      (b - a) < 1e-15 * (std::fabs(a) + std::fabs(b) + 1.0)) {
    acc.value += panel.value;
    acc.error += panel.error;
    if (panel.error > tol && (depth >= 48 || budget_spent)) acc.converged = false;
    return;
  }
  const double c = 0.5 * (a + b);
  adapt_rec<T>(f, a, c, 0.5 * tol, depth + 1, acc);
  adapt_rec<T>(f, c, b, 0.5 * tol, depth + 1, acc);
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integration on [a, b].
/// The target tolerance is max(abs_tol, rel_tol * |first whole-interval estimate|).
template <typename T, typename F>
QuadResult<T> integrate(F&& f, double a, double b, double abs_tol, double rel_tol) {
  if (!(b >= a)) throw std::invalid_argument("integrate: b < a");
  if (a == b) return {};
  auto first = gk15_panel<T>(f, a, b);
  const double tol = std::max(abs_tol, rel_tol * detail::abs_val(first.value));
  QuadResult<T> acc;
  detail::adapt_rec<T>(f, a, b, tol, 0, acc);
  return acc;
}

/// Adaptive integration over a pre-split grid of breakpoints (sorted, size >= 2).
/// Each segment gets an equal share of the absolute tolerance.
template <typename T, typename F>
QuadResult<T> integrate_segments(F&& f, const std::vector<double>& pts, double abs_tol,
                                 double rel_tol) {
  if (pts.size() < 2) throw std::invalid_argument("integrate_segments: need >= 2 breakpoints");
  // First pass: single panels per segment, to size the tolerance.
  T rough{};
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    rough += gk15_panel<T>(f, pts[i], pts[i + 1]).value;
  const double tol = std::max(abs_tol, rel_tol * detail::abs_val(rough));
  const double seg_tol = tol / static_cast<double>(pts.size() - 1);
  QuadResult<T> acc;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i + 1] <= pts[i]) continue;
    detail::adapt_rec<T>(f, pts[i], pts[i + 1], seg_tol, 0, acc);
  }
  return acc;
}

struct QuadratureError : std::runtime_error {
  double achieved;
  explicit QuadratureError(const std::string& what, double err)
      : std::runtime_error(what + " (achieved error estimate " + std::to_string(err) + ")"),
        achieved(err) {}
};

/// Integral of g(r) r^{-1-beta} dr over (0, inf) via u = log r, extending the
/// u-window outward until both tails contribute less than rel_tol of the total.
/// g must vanish fast enough at both ends (power sandwich around beta).
template <typename T, typename F>
QuadResult<T> log_r_integral(F&& g, double beta, double r_scale, double rel_tol) {
  auto integrand = [&](double u) {
    const double r = std::exp(u);
    return g(r) * std::exp(-beta * u);
  };
  const double u0 = std::log(std::max(r_scale, 1e-300));
  double ulo = u0 - 2.0, uhi = u0 + 2.0;
  QuadResult<T> acc = integrate<T>(integrand, ulo, uhi, 0.0, 0.25 * rel_tol);
  const double step = 2.0;
  const double u_min = u0 - 80.0, u_max = u0 + 80.0;
  int calm = 0;
  // Tail pieces get an absolute-tolerance floor tied to the accumulated value;
  // demanding relative accuracy of a negligible piece just digs into the noise
  // floor of the integrand.
  while (ulo > u_min && calm < 3) {
    const double floor_tol = 0.05 * rel_tol * detail::abs_val(acc.value);
    auto piece = integrate<T>(integrand, ulo - step, ulo, floor_tol, 0.25 * rel_tol);
    ulo -= step;
    acc.value += piece.value;
    acc.error += piece.error;
    acc.evals += piece.evals;
    calm = (detail::abs_val(piece.value) <= 0.05 * rel_tol * detail::abs_val(acc.value)) ? calm + 1 : 0;
  }
  if (calm < 3) acc.converged = false;  // tail still growing at the window cap
  calm = 0;
  while (uhi < u_max && calm < 3) {
    const double floor_tol = 0.05 * rel_tol * detail::abs_val(acc.value);
    auto piece = integrate<T>(integrand, uhi, uhi + step, floor_tol, 0.25 * rel_tol);
    uhi += step;
    acc.value += piece.value;
    acc.error += piece.error;
    acc.evals += piece.evals;
    calm = (detail::abs_val(piece.value) <= 0.05 * rel_tol * detail::abs_val(acc.value)) ? calm + 1 : 0;
  }
  if (calm < 3) acc.converged = false;
  return acc;
}

}  // namespace ballfields
