#pragma once

#include <cstddef>

// Entropy, cross-entropy and KL divergence of Laplace distributions, plus a
// composite-Simpson quadrature used as an independent check of the closed
// forms.

namespace robust_loss::divergence {

/// Laplace distribution with location mu and scale b > 0.
class LaplaceDist {
 public:
  LaplaceDist(double mu, double b);

  double mu() const noexcept { return mu_; }
  double b() const noexcept { return b_; }

  friend bool operator==(const LaplaceDist&, const LaplaceDist&) = default;

 private:
  double mu_;
  double b_;
};

/// Integration window and resolution for kl_numeric. The window extends
/// half_width * max(b1, b2) beyond both locations; n_points is odd and at
/// least 1001.
class QuadratureSpec {
 public:
  static constexpr double kDefaultHalfWidth = 40.0;
  static constexpr std::size_t kDefaultPoints = 100001;

  QuadratureSpec() : QuadratureSpec(kDefaultHalfWidth, kDefaultPoints) {}
  QuadratureSpec(double half_width, std::size_t n_points);

  double half_width() const noexcept { return half_width_; }
  std::size_t n_points() const noexcept { return n_points_; }

 private:
  double half_width_;
  std::size_t n_points_;
};

double laplace_pdf(double x, const LaplaceDist& d) noexcept;

/// 1 + log(2b).
double laplace_entropy(const LaplaceDist& d) noexcept;

/// -E_p[log q] = (b1 exp(-|mu1-mu2|/b1) + |mu1-mu2|) / b2 + log(2 b2).
double laplace_cross_entropy(const LaplaceDist& p, const LaplaceDist& q) noexcept;

/// KL(p || q) = (b1 exp(-d/b1) + d) / b2 + log(b2/b1) - 1, d = |mu1 - mu2|.
///
/// Evaluated as (b1/b2) (e^{-t} - 1 + t) + (r - 1 - log r) with t = d/b1 and
/// r = b1/b2, both terms non-negative and free of cancellation. When
/// b1 == b2 the result is bit-identical to losses::kl_loss(mu1 - mu2, (b, b)).
double laplace_kl(const LaplaceDist& p, const LaplaceDist& q) noexcept;

/// Composite Simpson estimate of the integral of p log(p/q). Panels are split
/// at mu1 and mu2 so the kinks of both densities fall on panel boundaries.
/// The point budget goes to panels within half_width * b1 of mu1, where p
/// carries its mass; the outer tails get a fixed 1001 points each.
double kl_numeric(const LaplaceDist& p, const LaplaceDist& q,
                  const QuadratureSpec& spec = QuadratureSpec{});

}  // namespace robust_loss::divergence
