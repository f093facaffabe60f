#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace ballfields {

struct EmpiricalCF {
  std::vector<double> theta;
  std::vector<std::complex<double>> value;
  std::size_t n = 0;
  /// Per-point confidence radius 3/sqrt(n).
  double radius = 0.0;
};

EmpiricalCF empirical_cf(const std::vector<double>& samples, const std::vector<double>& theta_grid);

struct CFDistance {
  double distance = 0.0;
  double theta_at = 0.0;
};

/// Sup over the shared grid of |phi_hat - phi|; grids must match exactly.
CFDistance cf_distance(const EmpiricalCF& e, const std::vector<double>& theta,
                       const std::vector<std::complex<double>>& reference);

struct PowerFit {
  double slope = 0.0;
  double intercept = 0.0;  // log-space intercept
  double residual = 0.0;   // RMS residual in log space
};

/// Least squares of log y on log x; all points must be positive.
PowerFit power_fit(const std::vector<double>& x, const std::vector<double>& y);

double mean(const std::vector<double>& v);
double variance(const std::vector<double>& v);

}  // namespace ballfields
