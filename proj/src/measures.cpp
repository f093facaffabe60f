#include "ballfields/measures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ballfields/stats.hpp"

namespace ballfields {

namespace {

// Length of [c - r, c + r] intersected with [lo, hi], computed relative to the
// center so tiny radii keep full precision even when |c| >> r.
double segment_ball_overlap(double c, double r, double lo, double hi) {
  return std::max(0.0, std::min(hi - c, r) + std::min(c - lo, r));
}

// Area of the open disk B((cx, cy), r) intersected with an axis-aligned
// rectangle, by adaptive slicing along x with chord overlaps; abs tol as given.
double disk_rect_area(double cx, double cy, double r, const Box& box, double abs_tol) {
  const double x0 = std::max(box.lo[0], cx - r);
  const double x1 = std::min(box.hi[0], cx + r);
  if (x1 <= x0) return 0.0;
  // Full containment shortcut.
  if (cx - r >= box.lo[0] && cx + r <= box.hi[0] && cy - r >= box.lo[1] && cy + r <= box.hi[1])
    return M_PI * r * r;
  auto chord = [&](double x) {
    const double dx = x - cx;
    const double h2 = r * r - dx * dx;
    if (h2 <= 0.0) return 0.0;
    const double h = std::sqrt(h2);
    return segment_ball_overlap(cy, h, box.lo[1], box.hi[1]);
  };
  return integrate<double>(chord, x0, x1, abs_tol, 0.0).value;
}

// Volume of B((cx,cy,cz), r) intersected with a 3-box: recursive slicing, each
// slice a disk-rectangle intersection in the (y, z) plane.
double ball_box_volume3(const Point& c, double r, const Box& box, double abs_tol) {
  const double x0 = std::max(box.lo[0], c[0] - r);
  const double x1 = std::min(box.hi[0], c[0] + r);
  if (x1 <= x0) return 0.0;
  bool inside = true;
  for (int i = 0; i < 3; ++i)
    inside = inside && (c[i] - r >= box.lo[i]) && (c[i] + r <= box.hi[i]);
  if (inside) return 4.0 * M_PI / 3.0 * r * r * r;
  Box rect;
  rect.dim = 2;
  rect.lo = make_point(box.lo[1], box.lo[2]);
  rect.hi = make_point(box.hi[1], box.hi[2]);
  auto slice = [&](double x) {
    const double dx = x - c[0];
    const double rr2 = r * r - dx * dx;
    if (rr2 <= 0.0) return 0.0;
    return disk_rect_area(c[1], c[2], std::sqrt(rr2), rect, 0.1 * abs_tol);
  };
  return integrate<double>(slice, x0, x1, abs_tol, 0.0).value;
}

double base_ball_mass(const BaseMeasure& b, int dim, const Point& y, double rr) {
  switch (b.kind) {
    case MeasureKind::Atomic: {
      double s = 0.0;
      const double rr2 = rr * rr;
      for (const auto& [a, w] : b.atoms)
        if (sq_dist(a, y, dim) < rr2) s += w;  // open ball: strict inequality
      return s;
    }
    case MeasureKind::IntervalLebesgue:
      return segment_ball_overlap(y[0], rr, 0.0, b.t);
    case MeasureKind::UniformBox: {
      if (dim == 1)
        return b.density * segment_ball_overlap(y[0], rr, b.box.lo[0], b.box.hi[0]);
      if (dim == 2) return b.density * disk_rect_area(y[0], y[1], rr, b.box, 1e-10);
      return b.density * ball_box_volume3(y, rr, b.box, 1e-10);
    }
  }
  return 0.0;
}

Box base_support(const BaseMeasure& b, int dim) {
  Box k;
  k.dim = dim;
  switch (b.kind) {
    case MeasureKind::Atomic: {
      k.lo = b.atoms.front().first;
      k.hi = b.atoms.front().first;
      for (const auto& [a, w] : b.atoms) k.absorb(a);
      break;
    }
    case MeasureKind::IntervalLebesgue:
      k.lo = make_point(0.0);
      k.hi = make_point(b.t);
      break;
    case MeasureKind::UniformBox:
      k = b.box;
      break;
  }
  return k;
}

double base_total_mass(const BaseMeasure& b) {
  switch (b.kind) {
    case MeasureKind::Atomic: {
      double s = 0.0;
      for (const auto& [a, w] : b.atoms) s += w;
      return s;
    }
    case MeasureKind::IntervalLebesgue:
      return b.t;
    case MeasureKind::UniformBox:
      return b.density * b.box.volume();
  }
  return 0.0;
}

double base_total_variation(const BaseMeasure& b) {
  switch (b.kind) {
    case MeasureKind::Atomic: {
      double s = 0.0;
      for (const auto& [a, w] : b.atoms) s += std::fabs(w);
      return s;
    }
    case MeasureKind::IntervalLebesgue:
      return b.t;
    case MeasureKind::UniformBox:
      return std::fabs(b.density) * b.box.volume();
  }
  return 0.0;
}

void require_finite_point(const Point& x, int dim) {
  for (int i = 0; i < dim; ++i)
    if (!std::isfinite(x[i])) throw std::invalid_argument("non-finite coordinate");
}

}  // namespace

Measure Measure::atomic(int dim, std::vector<std::pair<Point, double>> atoms) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("unsupported dimension");
  if (atoms.empty()) throw std::invalid_argument("atomic measure needs at least one atom");
  for (const auto& [a, w] : atoms) {
    require_finite_point(a, dim);
    if (!std::isfinite(w)) throw std::invalid_argument("non-finite atom weight");
  }
  Measure m;
  m.dim_ = dim;
  MeasureComponent c;
  c.base.kind = MeasureKind::Atomic;
  c.base.atoms = std::move(atoms);
  m.comps_.push_back(std::move(c));
  m.finalize();
  return m;
}

Measure Measure::uniform_box(const Box& box, double density) {
  if (box.dim < 1 || box.dim > kMaxDim) throw std::invalid_argument("unsupported dimension");
  for (int i = 0; i < box.dim; ++i)
    if (!(box.hi[i] > box.lo[i])) throw std::invalid_argument("uniform_box: empty box");
  Measure m;
  m.dim_ = box.dim;
  MeasureComponent c;
  c.base.kind = MeasureKind::UniformBox;
  c.base.box = box;
  c.base.density = density;
  m.comps_.push_back(std::move(c));
  m.finalize();
  return m;
}

Measure Measure::interval_lebesgue(double t) {
  if (!(t > 0.0)) throw std::invalid_argument("interval_lebesgue: t must be positive");
  Measure m;
  m.dim_ = 1;
  MeasureComponent c;
  c.base.kind = MeasureKind::IntervalLebesgue;
  c.base.t = t;
  m.comps_.push_back(std::move(c));
  m.finalize();
  return m;
}

Measure Measure::combination(const std::vector<std::pair<double, Measure>>& terms) {
  if (terms.empty()) throw std::invalid_argument("combination: empty term list");
  Measure m;
  m.dim_ = terms.front().second.dim_;
  for (const auto& [coeff, mu] : terms) {
    if (mu.dim_ != m.dim_) throw std::invalid_argument("combination: dimension mismatch");
    for (MeasureComponent c : mu.comps_) {
      c.coeff *= coeff;
      m.comps_.push_back(std::move(c));
    }
  }
  m.finalize();
  return m;
}

Measure Measure::takenaka(int dim, const Point& z) {
  return atomic(dim, {{z, 1.0}, {Point{}, -1.0}});
}

void Measure::finalize() {
  total_mass_ = 0.0;
  total_variation_ = 0.0;
  bool first = true;
  for (const auto& c : comps_) {
    total_mass_ += c.coeff * base_total_mass(c.base);
    total_variation_ += std::fabs(c.coeff) * base_total_variation(c.base);
    // Transformed support: bounding box of the transformed base-box corners.
    const Box kb = base_support(c.base, dim_);
    Box tk;
    tk.dim = dim_;
    bool first_corner = true;
    const int ncorner = 1 << dim_;
    for (int mask = 0; mask < ncorner; ++mask) {
      Point corner{};
      for (int i = 0; i < dim_; ++i) corner[i] = (mask & (1 << i)) ? kb.hi[i] : kb.lo[i];
      Point p = c.rot.apply(corner, dim_);
      for (int i = 0; i < dim_; ++i) p[i] = c.shift[i] + c.scale * p[i];
      if (first_corner) {
        tk.lo = p;
        tk.hi = p;
        first_corner = false;
      } else {
        tk.absorb(p);
      }
    }
    if (first) {
      support_ = tk;
      first = false;
    } else {
      support_.absorb(tk);
    }
  }
}

double Measure::ball_mass(const Point& x, double r) const {
  if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("ball_mass: r must be positive and finite");
  require_finite_point(x, dim_);
  double total = 0.0;
  for (const auto& c : comps_) {
    Point y{};
    for (int i = 0; i < dim_; ++i) y[i] = x[i] - c.shift[i];
    y = c.rot.apply_inverse(y, dim_);
    for (int i = 0; i < dim_; ++i) y[i] /= c.scale;
    total += c.coeff * base_ball_mass(c.base, dim_, y, r / c.scale);
  }
  return total;
}

Measure Measure::translated(const Point& s) const {
  require_finite_point(s, dim_);
  Measure m = *this;
  for (auto& c : m.comps_)
    for (int i = 0; i < dim_; ++i) c.shift[i] += s[i];
  m.finalize();
  return m;
}

Measure Measure::rotated(const Rotation& theta) const {
  Measure m = *this;
  for (auto& c : m.comps_) {
    c.rot = theta.compose(c.rot, dim_);
    c.shift = theta.apply(c.shift, dim_);
  }
  m.finalize();
  return m;
}

Measure Measure::dilated(double a) const {
  if (!(a > 0.0)) throw std::invalid_argument("dilated: a must be positive");
  Measure m = *this;
  for (auto& c : m.comps_) {
    c.scale *= a;
    for (int i = 0; i < dim_; ++i) c.shift[i] *= a;
  }
  m.finalize();
  return m;
}

Measure Measure::scaled(double c) const {
  Measure m = *this;
  for (auto& comp : m.comps_) comp.coeff *= c;
  m.finalize();
  return m;
}

bool Measure::absolutely_continuous() const {
  for (const auto& c : comps_)
    if (c.base.kind == MeasureKind::Atomic) return false;
  return true;
}

double Measure::density(const Point& x) const {
  double total = 0.0;
  for (const auto& c : comps_) {
    if (c.base.kind == MeasureKind::Atomic)
      throw std::invalid_argument("density: measure has an atomic component");
    Point y{};
    for (int i = 0; i < dim_; ++i) y[i] = x[i] - c.shift[i];
    y = c.rot.apply_inverse(y, dim_);
    for (int i = 0; i < dim_; ++i) y[i] /= c.scale;
    double phi = 0.0;
    if (c.base.kind == MeasureKind::IntervalLebesgue) {
      phi = (y[0] > 0.0 && y[0] < c.base.t) ? 1.0 : 0.0;
    } else {
      phi = c.base.box.contains(y) ? c.base.density : 0.0;
    }
    total += c.coeff * std::pow(c.scale, -dim_) * phi;
  }
  return total;
}

std::vector<double> Measure::ball_mass_breakpoints(double r) const {
  if (dim_ != 1) throw std::logic_error("ball_mass_breakpoints: d=1 only");
  const double wlo = support_.lo[0] - r, whi = support_.hi[0] + r;
  std::vector<double> pts{wlo, whi};
  auto push = [&](double x) {
    if (x > wlo && x < whi) pts.push_back(x);
  };
  for (const auto& c : comps_) {
    const double sgn = c.rot.m[0][0];  // +-1 in d=1
    const double rr = r / c.scale;
    auto to_x = [&](double y) { return c.shift[0] + c.scale * sgn * y; };
    std::vector<double> ys;
    switch (c.base.kind) {
      case MeasureKind::Atomic:
        for (const auto& [a, w] : c.base.atoms) {
          ys.push_back(a[0] - rr);
          ys.push_back(a[0] + rr);
        }
        break;
      case MeasureKind::IntervalLebesgue:
        ys = {-rr, rr, c.base.t - rr, c.base.t + rr};
        break;
      case MeasureKind::UniformBox:
        ys = {c.base.box.lo[0] - rr, c.base.box.lo[0] + rr, c.base.box.hi[0] - rr,
              c.base.box.hi[0] + rr};
        break;
    }
    for (double y : ys) push(to_x(y));
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](double a, double b) { return std::fabs(a - b) < 1e-14; }),
            pts.end());
  return pts;
}

std::vector<double> Measure::density_breakpoints() const {
  if (dim_ != 1) throw std::logic_error("density_breakpoints: d=1 only");
  std::vector<double> pts{support_.lo[0], support_.hi[0]};
  for (const auto& c : comps_) {
    const double sgn = c.rot.m[0][0];
    auto to_x = [&](double y) { return c.shift[0] + c.scale * sgn * y; };
    if (c.base.kind == MeasureKind::IntervalLebesgue) {
      pts.push_back(to_x(0.0));
      pts.push_back(to_x(c.base.t));
    } else if (c.base.kind == MeasureKind::UniformBox) {
      pts.push_back(to_x(c.base.box.lo[0]));
      pts.push_back(to_x(c.base.box.hi[0]));
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](double a, double b) { return std::fabs(a - b) < 1e-14; }),
            pts.end());
  return pts;
}

double gamma_integral(const Measure& mu, double r, double alpha, double rel_tol) {
  if (!(alpha > 1.0 && alpha <= 2.0)) throw std::invalid_argument("gamma: alpha must lie in (1,2]");
  if (!(r > 0.0)) throw std::invalid_argument("gamma: r must be positive");
  auto res = ball_mass_x_integral<double>(
      mu, r, [alpha](double v) { return std::pow(std::fabs(v), alpha); }, rel_tol);
  if (!res.converged && res.error > 10 * rel_tol * std::fabs(res.value))
    throw QuadratureError("gamma quadrature did not converge", res.error);
  return res.value;
}

MembershipReport membership_probe(const Measure& mu, double alpha, double beta,
                                  const std::vector<double>& r_grid) {
  if (r_grid.size() < 2) throw std::invalid_argument("membership_probe: grid too small");
  std::vector<double> grid = r_grid;
  std::sort(grid.begin(), grid.end());
  if (!(grid.front() <= 1e-2 && grid.back() >= 1e2))
    throw std::invalid_argument(
        "membership_probe: r grid must span two decades on each side of 1");
  MembershipReport rep;
  rep.r_grid = grid;
  rep.gamma_values.reserve(grid.size());
  bool any_positive = false;
  for (double r : grid) {
    const double g = gamma_integral(mu, r, alpha);
    rep.gamma_values.push_back(g);
    any_positive = any_positive || g > 0.0;
  }
  if (!any_positive) throw std::runtime_error("membership_probe: gamma vanishes on the grid");
  auto decade_fit = [&](double lo, double hi) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (grid[i] >= lo && grid[i] <= hi && rep.gamma_values[i] > 0.0) {
        xs.push_back(grid[i]);
        ys.push_back(rep.gamma_values[i]);
      }
    }
    if (xs.size() < 2) throw std::runtime_error("membership_probe: degenerate decade");
    return power_fit(xs, ys).slope;
  };
  rep.q_hat = decade_fit(grid.front(), grid.front() * 10.0 * (1 + 1e-12));
  rep.p_hat = decade_fit(grid.back() / 10.0 * (1 - 1e-12), grid.back());
  rep.small_r_ok = rep.q_hat > beta;
  rep.large_r_ok = rep.p_hat < beta;
  return rep;
}

}  // namespace ballfields
