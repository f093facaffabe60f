#include "ballfields/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace ballfields {

EmpiricalCF empirical_cf(const std::vector<double>& samples,
                         const std::vector<double>& theta_grid) {
  if (samples.empty()) throw std::invalid_argument("empirical_cf: empty sample");
  EmpiricalCF out;
  out.theta = theta_grid;
  out.n = samples.size();
  out.radius = 3.0 / std::sqrt(static_cast<double>(out.n));
  out.value.resize(theta_grid.size());
  for (std::size_t j = 0; j < theta_grid.size(); ++j) {
    const double th = theta_grid[j];
    double re = 0.0, im = 0.0;
    for (double x : samples) {
      re += std::cos(th * x);
      im += std::sin(th * x);
    }
    out.value[j] = std::complex<double>(re, im) / static_cast<double>(out.n);
  }
  return out;
}

CFDistance cf_distance(const EmpiricalCF& e, const std::vector<double>& theta,
                       const std::vector<std::complex<double>>& reference) {
  if (e.theta.size() != theta.size() || theta.size() != reference.size())
    throw std::invalid_argument("cf_distance: grid mismatch");
  for (std::size_t j = 0; j < theta.size(); ++j)
    if (e.theta[j] != theta[j]) throw std::invalid_argument("cf_distance: grid mismatch");
  CFDistance out;
  for (std::size_t j = 0; j < theta.size(); ++j) {
    const double d = std::abs(e.value[j] - reference[j]);
    if (d > out.distance) {
      out.distance = d;
      out.theta_at = theta[j];
    }
  }
  return out;
}

PowerFit power_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("power_fit: need >= 2 matching points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw std::invalid_argument("power_fit: nonpositive value");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  PowerFit f;
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("power_fit: degenerate x grid");
  f.slope = (n * sxy - sx * sy) / denom;
  f.intercept = (sy - f.slope * sx) / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = std::log(y[i]) - (f.intercept + f.slope * std::log(x[i]));
    ss += r * r;
  }
  f.residual = std::sqrt(ss / n);
  return f;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double variance(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

}  // namespace ballfields
