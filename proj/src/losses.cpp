#include "robust_loss/losses.hpp"

#include "robust_loss/detail/numeric.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace robust_loss::losses {

namespace {

void require_positive(double v, const char* name) {
  if (!std::isfinite(v) || !(v > 0.0)) {
    throw std::invalid_argument(std::string(name) + " must be finite and > 0, got " +
                                std::to_string(v));
  }
}

}  // namespace

HuberParams::HuberParams(double alpha) : alpha_(alpha) { require_positive(alpha, "alpha"); }

KlLossParams::KlLossParams(double alpha, double beta) : alpha_(alpha), beta_(beta) {
  require_positive(alpha, "alpha");
  require_positive(beta, "beta");
}

double l1(double x) noexcept { return std::fabs(x); }

double l2(double x) noexcept { return 0.5 * x * x; }

double huber(double x, const HuberParams& p) noexcept {
  const double a = p.alpha();
  const double ax = std::fabs(x);
  if (ax <= a) return 0.5 * x * x;
  return a * (ax - 0.5 * a);
}

double huber_grad(double x, const HuberParams& p) noexcept {
  const double a = p.alpha();
  if (std::fabs(x) <= a) return x;
  return x > 0.0 ? a : -a;
}

// alpha * (exp(-t) - 1 + t) / beta with t = |x|/alpha; same value as the
// textbook form but without cancellation for |x| << alpha.
double kl_loss(double x, const KlLossParams& p) noexcept {
  const double a = p.alpha();
  return (a / p.beta()) * detail::exp_excess(std::fabs(x) / a);
}

double kl_loss_grad(double x, const KlLossParams& p) noexcept {
  if (x == 0.0) return 0.0;
  const double mag = -std::expm1(-std::fabs(x) / p.alpha()) / p.beta();
  return x > 0.0 ? mag : -mag;
}

double kl_loss_hess(double x, const KlLossParams& p) noexcept {
  const double a = p.alpha();
  return std::exp(-std::fabs(x) / a) / (a * p.beta());
}

double kl_loss_piecewise_approx(double x, const KlLossParams& p) noexcept {
  const double a = p.alpha();
  const double ax = std::fabs(x);
  if (ax <= a) return x * x / (2.0 * a * p.beta());
  return (ax - a) / p.beta();
}

double kl_loss_quadratic_approx(double x, const KlLossParams& p) noexcept {
  return x * x / (2.0 * p.alpha() * p.beta());
}

KlLossParams lower_bound_params(double alpha) {
  require_positive(alpha, "alpha");
  return KlLossParams(alpha, 1.0 / alpha);
}

KlLossParams upper_bound_params(double alpha) {
  require_positive(alpha, "alpha");
  return KlLossParams(alpha / 2.0, 1.0 / alpha);
}

KlLossParams rescale_params(const KlLossParams& p, double gamma, double lambda) {
  require_positive(gamma, "gamma");
  require_positive(lambda, "lambda");
  return KlLossParams(p.alpha() / gamma, p.beta() / (gamma * lambda));
}

KlLossParams huber_equivalent_params(double alpha, double gamma, double lambda) {
  require_positive(alpha, "alpha");
  require_positive(gamma, "gamma");
  require_positive(lambda, "lambda");
  return KlLossParams(alpha / gamma, 1.0 / (alpha * gamma * lambda));
}

}  // namespace robust_loss::losses
