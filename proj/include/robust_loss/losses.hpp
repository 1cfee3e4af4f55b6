#pragma once

// Closed-form regression losses: L1, L2, Huber, and the KL-Laplace loss
// D_{alpha,beta}(x) = (alpha * exp(-|x|/alpha) + |x| - alpha) / beta.
//
// The KL-Laplace loss is the KL divergence between two Laplace distributions
// with its constant terms dropped and its minimum moved to zero. alpha plays
// the role of the label-noise scale and beta the prediction-noise scale.

namespace robust_loss::losses {

/// Transition point of the Huber loss. Always finite and positive.
class HuberParams {
 public:
  explicit HuberParams(double alpha);

  double alpha() const noexcept { return alpha_; }

  friend bool operator==(const HuberParams&, const HuberParams&) = default;

 private:
  double alpha_;
};

/// (alpha, beta) of the KL-Laplace loss: label-noise scale and
/// prediction-noise scale. Both finite and positive.
class KlLossParams {
 public:
  KlLossParams(double alpha, double beta);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }

  friend bool operator==(const KlLossParams&, const KlLossParams&) = default;

 private:
  double alpha_;
  double beta_;
};

double l1(double x) noexcept;
double l2(double x) noexcept;

double huber(double x, const HuberParams& p) noexcept;

/// Derivative of the Huber loss. At |x| == alpha both branches agree, so the
/// quadratic branch's value x is returned.
double huber_grad(double x, const HuberParams& p) noexcept;

double kl_loss(double x, const KlLossParams& p) noexcept;

/// sign(x) * (1 - exp(-|x|/alpha)) / beta, exactly 0 at x == 0.
double kl_loss_grad(double x, const KlLossParams& p) noexcept;

/// exp(-|x|/alpha) / (alpha * beta); 1/(alpha*beta) at the origin.
double kl_loss_hess(double x, const KlLossParams& p) noexcept;

/// Quadratic inside |x| <= alpha, shifted linear outside. Never more than
/// alpha/beta away from kl_loss.
double kl_loss_piecewise_approx(double x, const KlLossParams& p) noexcept;

/// Second-order Taylor expansion of kl_loss about zero: x^2 / (2 alpha beta).
double kl_loss_quadratic_approx(double x, const KlLossParams& p) noexcept;

/// (alpha, 1/alpha): the tightest KL-Laplace loss lying below H_alpha.
KlLossParams lower_bound_params(double alpha);

/// (alpha/2, 1/alpha): the tightest KL-Laplace loss lying above H_alpha.
KlLossParams upper_bound_params(double alpha);

/// Parameters q with lambda * kl_loss(gamma * x, p) == kl_loss(x, q).
KlLossParams rescale_params(const KlLossParams& p, double gamma, double lambda);

/// KL-Laplace parameters equivalent to lambda * H_alpha(gamma * x) under the
/// lower-bound convention H_alpha ~ D_{alpha, 1/alpha}. The equivalence is an
/// approximation: the true Huber curve lies between this configuration and
/// the one obtained from upper_bound_params.
KlLossParams huber_equivalent_params(double alpha, double gamma, double lambda);

}  // namespace robust_loss::losses
