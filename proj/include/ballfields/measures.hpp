#pragma once

#include <utility>
#include <vector>

#include "ballfields/geometry.hpp"
#include "ballfields/quadrature.hpp"

namespace ballfields {

enum class MeasureKind { Atomic, UniformBox, IntervalLebesgue };

struct BaseMeasure {
  MeasureKind kind = MeasureKind::Atomic;
  std::vector<std::pair<Point, double>> atoms;  // Atomic
  Box box;                                      // UniformBox
  double density = 0.0;                         // UniformBox level
  double t = 0.0;                               // IntervalLebesgue |. n (0,t)|, d=1
};

/// One term of a signed combination: coeff * (tau_shift Theta dil_scale) base.
struct MeasureComponent {
  double coeff = 1.0;
  double scale = 1.0;
  Rotation rot;
  Point shift{};
  BaseMeasure base;
};

/// A signed measure on R^d from the closed family (atomic / uniform-on-box /
/// interval Lebesgue), with exact group actions. Immutable after construction.
class Measure {
 public:
  static Measure atomic(int dim, std::vector<std::pair<Point, double>> atoms);
  static Measure uniform_box(const Box& box, double density);
  static Measure interval_lebesgue(double t);
  static Measure combination(const std::vector<std::pair<double, Measure>>& terms);
  /// Takenaka test measure delta_z - delta_0.
  static Measure takenaka(int dim, const Point& z);

  int dim() const { return dim_; }
  const Box& support() const { return support_; }
  /// Signed total mass mu(R^d).
  double total_mass() const { return total_mass_; }
  /// Total variation bound ||mu|| (exact for single-component measures).
  double total_variation() const { return total_variation_; }
  const std::vector<MeasureComponent>& components() const { return comps_; }

  /// mu(B(x, r)) with the open ball B(x, r) = { ||y - x|| < r }.
  double ball_mass(const Point& x, double r) const;

  Measure translated(const Point& s) const;
  Measure rotated(const Rotation& theta) const;
  /// Dilation mu_a(A) = mu(a^{-1} A), a > 0.
  Measure dilated(double a) const;
  Measure scaled(double c) const;  // c * mu

  /// True when every component is absolutely continuous.
  bool absolutely_continuous() const;
  /// Lebesgue density at x (absolutely continuous measures only).
  double density(const Point& x) const;

  /// d=1 only: x-values where x -> mu(B(x,r)) has kinks, clipped to
  /// [support.lo - r, support.hi + r]; includes both ends. Sorted.
  std::vector<double> ball_mass_breakpoints(double r) const;
  /// d=1 only: kink locations of the density.
  std::vector<double> density_breakpoints() const;

 private:
  Measure() = default;
  void finalize();

  int dim_ = 1;
  std::vector<MeasureComponent> comps_;
  Box support_;
  double total_mass_ = 0.0;
  double total_variation_ = 0.0;
};

/// Integral over R^d of f(mu(B(x, r))); the integrand vanishes outside the
/// enlarged support window. T is double or complex<double>.
template <typename T, typename F>
QuadResult<T> ball_mass_x_integral(const Measure& mu, double r, F&& f, double rel_tol);

/// gamma(r) = int |mu(B(x,r))|^alpha dx.
double gamma_integral(const Measure& mu, double r, double alpha, double rel_tol = 1e-6);

struct MembershipReport {
  std::vector<double> r_grid;
  std::vector<double> gamma_values;
  double q_hat = 0.0;  // small-r log-log slope
  double p_hat = 0.0;  // large-r log-log slope
  bool small_r_ok = false;  // q_hat > beta
  bool large_r_ok = false;  // p_hat < beta
};

/// Diagnostic fit of the growth exponents of gamma; not a membership proof.
MembershipReport membership_probe(const Measure& mu, double alpha, double beta,
                                  const std::vector<double>& r_grid);

// --- template implementation ---

template <typename T, typename F>
QuadResult<T> ball_mass_x_integral(const Measure& mu, double r, F&& f, double rel_tol) {
  const int d = mu.dim();
  if (d == 1) {
    auto pts = mu.ball_mass_breakpoints(r);
    auto g = [&](double x) { return f(mu.ball_mass(make_point(x), r)); };
    return integrate_segments<T>(g, pts, 0.0, rel_tol);
  }
  const Box w = mu.support().enlarged(r);
  if (d == 2) {
    auto outer = [&](double x0) {
      auto inner = [&](double x1) { return f(mu.ball_mass(make_point(x0, x1), r)); };
      return integrate<T>(inner, w.lo[1], w.hi[1], 0.0, 0.2 * rel_tol).value;
    };
    return integrate<T>(outer, w.lo[0], w.hi[0], 0.0, rel_tol);
  }
  auto outer = [&](double x0) {
    auto mid = [&](double x1) {
      auto inner = [&](double x2) { return f(mu.ball_mass(make_point(x0, x1, x2), r)); };
      return integrate<T>(inner, w.lo[2], w.hi[2], 0.0, 0.1 * rel_tol).value;
    };
    return integrate<T>(mid, w.lo[1], w.hi[1], 0.0, 0.2 * rel_tol).value;
  };
  return integrate<T>(outer, w.lo[0], w.hi[0], 0.0, rel_tol);
}

}  // namespace ballfields
