#include "robust_loss/divergence.hpp"

#include "robust_loss/detail/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace robust_loss::divergence {

LaplaceDist::LaplaceDist(double mu, double b) : mu_(mu), b_(b) {
  if (!std::isfinite(mu)) throw std::invalid_argument("LaplaceDist: mu must be finite");
  if (!std::isfinite(b) || !(b > 0.0)) {
    throw std::invalid_argument("LaplaceDist: b must be finite and > 0, got " + std::to_string(b));
  }
}

QuadratureSpec::QuadratureSpec(double half_width, std::size_t n_points)
    : half_width_(half_width), n_points_(n_points) {
  if (!std::isfinite(half_width) || !(half_width > 0.0)) {
    throw std::invalid_argument("QuadratureSpec: half_width must be finite and > 0");
  }
  if (n_points < 1001) throw std::invalid_argument("QuadratureSpec: n_points must be >= 1001");
  if (n_points % 2 == 0) throw std::invalid_argument("QuadratureSpec: n_points must be odd");
}

double laplace_pdf(double x, const LaplaceDist& d) noexcept {
  return std::exp(-std::fabs(x - d.mu()) / d.b()) / (2.0 * d.b());
}

double laplace_entropy(const LaplaceDist& d) noexcept { return 1.0 + std::log(2.0 * d.b()); }

double laplace_cross_entropy(const LaplaceDist& p, const LaplaceDist& q) noexcept {
  const double d = std::fabs(p.mu() - q.mu());
  return (p.b() * std::exp(-d / p.b()) + d) / q.b() + std::log(2.0 * q.b());
}

double laplace_kl(const LaplaceDist& p, const LaplaceDist& q) noexcept {
  const double b1 = p.b();
  const double d = std::fabs(p.mu() - q.mu());
  const double ratio = b1 / q.b();
  const double location_term = ratio * detail::exp_excess(d / b1);
  if (ratio == 1.0) return location_term;
  return location_term + detail::log_excess(ratio);
}

namespace {

// p log(p/q) written in log space so neither density has to be formed
// explicitly; terms where p underflows contribute 0.
double kl_integrand(double x, const LaplaceDist& p, const LaplaceDist& q) noexcept {
  const double log_p = -std::fabs(x - p.mu()) / p.b() - std::log(2.0 * p.b());
  const double log_q = -std::fabs(x - q.mu()) / q.b() - std::log(2.0 * q.b());
  const double density = std::exp(log_p);
  if (density == 0.0) return 0.0;
  return density * (log_p - log_q);
}

double simpson(double lo, double hi, std::size_t n_points, const LaplaceDist& p,
               const LaplaceDist& q) {
  if (hi <= lo) return 0.0;
  const std::size_t intervals = n_points - 1;
  const double h = (hi - lo) / static_cast<double>(intervals);
  double sum = kl_integrand(lo, p, q) + kl_integrand(hi, p, q);
  for (std::size_t i = 1; i < intervals; ++i) {
    const double x = lo + h * static_cast<double>(i);
    sum += (i % 2 == 1 ? 4.0 : 2.0) * kl_integrand(x, p, q);
  }
  return sum * h / 3.0;
}

}  // namespace

double kl_numeric(const LaplaceDist& p, const LaplaceDist& q, const QuadratureSpec& spec) {
  const double lo_mu = std::min(p.mu(), q.mu());
  const double hi_mu = std::max(p.mu(), q.mu());
  const double window = spec.half_width() * std::max(p.b(), q.b());
  const double lo = lo_mu - window;
  const double hi = hi_mu + window;

  // Outside mu1 +- half_width * b1 the density p has decayed below
  // exp(-half_width) and the integrand is negligible; the point budget goes
  // to the panels inside that support.
  const double support_lo = std::max(lo, p.mu() - spec.half_width() * p.b());
  const double support_hi = std::min(hi, p.mu() + spec.half_width() * p.b());

  std::vector<double> edges{lo, hi, p.mu(), q.mu(), support_lo, support_hi};
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  constexpr std::size_t kMinPanelPoints = 1001;
  const double support_length = support_hi - support_lo;
  double result = 0.0;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const double a = edges[k];
    const double b = edges[k + 1];
    std::size_t n = kMinPanelPoints;
    if (a >= support_lo && b <= support_hi && support_length > 0.0) {
      n = static_cast<std::size_t>(static_cast<double>(spec.n_points()) * (b - a) / support_length);
      n = std::max(n, kMinPanelPoints);
      if (n % 2 == 0) ++n;
    }
    result += simpson(a, b, n, p, q);
  }
  return result;
}

}  // namespace robust_loss::divergence
