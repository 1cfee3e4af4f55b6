#pragma once

#include <cmath>

namespace robust_loss::detail {

/// exp(-t) - 1 + t for t >= 0, accurate to a few ulps including near t = 0
/// where the direct expression cancels catastrophically.
inline double exp_excess(double t) noexcept {
  if (t >= 0.5) return std::expm1(-t) + t;
  // Alternating Taylor series t^2/2! - t^3/3! + ...
  double term = 0.5 * t * t;
  double sum = term;
  for (int k = 3; k < 40; ++k) {
    term *= -t / k;
    sum += term;
    if (std::fabs(term) <= 1e-17 * sum) break;
  }
  return sum;
}

/// r - 1 - log(r) for r > 0, accurate near r = 1.
inline double log_excess(double r) noexcept {
  const double u = r - 1.0;
  if (std::fabs(u) >= 0.25) return u - std::log(r);
  // u - log1p(u) = u^2/2 - u^3/3 + u^4/4 - ...
  double power = u * u;
  double sum = 0.0;
  for (int k = 2; k < 80; ++k) {
    const double term = (k % 2 == 0 ? power : -power) / k;
    sum += term;
    if (std::fabs(term) <= 1e-17 * std::fabs(sum)) break;
    power *= u;
  }
  return sum;
}

}  // namespace robust_loss::detail
