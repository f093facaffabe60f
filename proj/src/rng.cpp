#include "ballfields/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace ballfields {

namespace {

// log(k!) for the PTRD acceptance test.
double log_factorial(std::uint64_t k) {
  static const double table[10] = {0.0,
                                   0.0,
                                   0.693147180559945,
                                   1.791759469228055,
                                   3.178053830347946,
                                   4.787491742782046,
                                   6.579251212010101,
                                   8.525161361065415,
                                   10.604602902745251,
                                   12.801827480081469};
  if (k < 10) return table[k];
  const double x = static_cast<double>(k) + 1.0;
  // Stirling series.
  return (x - 0.5) * std::log(x) - x + 0.918938533204672741780 + 1.0 / (12.0 * x) -
         1.0 / (360.0 * x * x * x);
}

}  // namespace

std::uint64_t RngStream::poisson(double mean) {
  if (!(mean >= 0.0)) throw std::invalid_argument("poisson: mean must be nonnegative");
  if (mean == 0.0) return 0;
  if (mean < 30.0) {
    // Inversion by multiplication.
    const double limit = std::exp(-mean);
    double prod = uniform01();
    std::uint64_t k = 0;
    while (prod > limit) {
      prod *= uniform01();
      ++k;
    }
    return k;
  }
  // Hoermann's PTRD transformed rejection, exact for mean >= ~10.
  const double smu = std::sqrt(mean);
  const double b = 0.931 + 2.53 * smu;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    double u;
    double v = uniform01();
    if (v <= 0.86 * v_r) {
      u = v / v_r - 0.43;
      return static_cast<std::uint64_t>(
          std::floor((2.0 * a / (0.5 - std::fabs(u)) + b) * u + mean + 0.445));
    }
    if (v >= v_r) {
      u = uniform01() - 0.5;
    } else {
      u = v / v_r - 0.93;
      u = (u < 0 ? -0.5 : 0.5) - u;
      v = uniform01() * v_r;
    }
    const double us = 0.5 - std::fabs(u);
    if (us < 0.013 && v > us) continue;
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.445);
    v = v * inv_alpha / (a / (us * us) + b);
    if (k >= 10.0) {
      if (std::log(v * smu) <=
          (k + 0.5) * std::log(mean / k) - mean - 0.918938533204672741780 + k -
              (1.0 / 12.0 - 1.0 / (360.0 * k * k)) / k) {
        return static_cast<std::uint64_t>(k);
      }
    } else if (k >= 0.0) {
      if (std::log(v) <= k * std::log(mean) - mean - log_factorial(static_cast<std::uint64_t>(k)))
        return static_cast<std::uint64_t>(k);
    }
  }
}

}  // namespace ballfields
