#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace ballfields {

inline constexpr int kMaxDim = 3;

using Point = std::array<double, kMaxDim>;

inline Point make_point(double x, double y = 0.0, double z = 0.0) {
  return Point{x, y, z};
}

inline double sq_dist(const Point& a, const Point& b, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

/// Volume of the Euclidean unit ball in dimension d (d <= 3).
inline double unit_ball_volume(int dim) {
  switch (dim) {
    case 1: return 2.0;
    case 2: return M_PI;
    case 3: return 4.0 * M_PI / 3.0;
    default: throw std::invalid_argument("unsupported dimension");
  }
}

struct Box {
  int dim = 1;
  Point lo{};
  Point hi{};

  double side(int i) const { return hi[i] - lo[i]; }
  double volume() const {
    double v = 1.0;
    for (int i = 0; i < dim; ++i) v *= side(i);
    return v;
  }
  /// Axis-aligned enlargement K + [-r, r]^d.
  Box enlarged(double r) const {
    Box b = *this;
    for (int i = 0; i < dim; ++i) {
      b.lo[i] -= r;
      b.hi[i] += r;
    }
    return b;
  }
  void absorb(const Point& p) {
    for (int i = 0; i < dim; ++i) {
      lo[i] = std::min(lo[i], p[i]);
      hi[i] = std::max(hi[i], p[i]);
    }
  }
  void absorb(const Box& other) {
    for (int i = 0; i < dim; ++i) {
      lo[i] = std::min(lo[i], other.lo[i]);
      hi[i] = std::max(hi[i], other.hi[i]);
    }
  }
  double diameter() const {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) s += side(i) * side(i);
    return std::sqrt(s);
  }
  bool contains(const Point& p) const {
    for (int i = 0; i < dim; ++i)
      if (p[i] < lo[i] || p[i] > hi[i]) return false;
    return true;
  }
};

inline Box make_box1(double lo, double hi) {
  Box b;
  b.dim = 1;
  b.lo = make_point(lo);
  b.hi = make_point(hi);
  return b;
}

/// Orthogonal matrix acting on R^d (d <= 3); identity by default.
struct Rotation {
  std::array<std::array<double, kMaxDim>, kMaxDim> m{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};

  static Rotation identity() { return Rotation{}; }

  /// Reflection along the first axis; the only nontrivial O(1) element in d=1.
  static Rotation reflection() {
    Rotation r;
    r.m[0][0] = -1.0;
    return r;
  }

  /// Rotation by angle in the (i, j) coordinate plane.
  static Rotation plane(int i, int j, double angle) {
    Rotation r;
    const double c = std::cos(angle), s = std::sin(angle);
    r.m[i][i] = c;
    r.m[j][j] = c;
    r.m[i][j] = -s;
    r.m[j][i] = s;
    return r;
  }

  Point apply(const Point& p, int dim) const {
    Point q{};
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) q[i] += m[i][j] * p[j];
    return q;
  }
  /// Inverse action (transpose).
  Point apply_inverse(const Point& p, int dim) const {
    Point q{};
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) q[i] += m[j][i] * p[j];
    return q;
  }
  Rotation compose(const Rotation& other, int dim) const {
    Rotation r;
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        double s = 0.0;
        for (int k = 0; k < dim; ++k) s += m[i][k] * other.m[k][j];
        r.m[i][j] = s;
      }
    return r;
  }
};

}  // namespace ballfields
