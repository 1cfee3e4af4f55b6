#include "robust_loss/kernels.hpp"

#include "robust_loss/losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace robust_loss::kernels {

DesignMatrix::DesignMatrix(std::span<const double> x, std::size_t n_cols)
    : rows_(x.size()), cols_(n_cols), values_(x.size() * n_cols) {
  if (n_cols == 0) throw std::invalid_argument("DesignMatrix: need at least one column");
  for (std::size_t i = 0; i < rows_; ++i) values_[i] = 1.0;
  for (std::size_t k = 1; k < cols_; ++k) {
    double* col = values_.data() + k * rows_;
    const double* prev = values_.data() + (k - 1) * rows_;
    for (std::size_t i = 0; i < rows_; ++i) col[i] = prev[i] * x[i];
  }
}

namespace {

void check_shapes(const DesignMatrix& design, std::span<const double> y,
                  std::span<const double> theta, std::span<double> grad) {
  if (y.size() != design.rows() || theta.size() != design.cols() ||
      grad.size() != design.cols()) {
    throw std::invalid_argument("huber_objective: shape mismatch");
  }
}

double huber_value(double r, double alpha) noexcept {
  const double ar = std::fabs(r);
  return ar <= alpha ? 0.5 * r * r : alpha * (ar - 0.5 * alpha);
}

double clamp_residual(double r, double alpha) noexcept {
  return std::clamp(r, -alpha, alpha);
}

}  // namespace

double huber_objective_serial(const DesignMatrix& design, std::span<const double> y,
                              std::span<const double> theta, double alpha,
                              std::span<double> grad) {
  check_shapes(design, y, theta, grad);
  const losses::HuberParams params(alpha);
  std::fill(grad.begin(), grad.end(), 0.0);
  double objective = 0.0;
  for (std::size_t i = 0; i < design.rows(); ++i) {
    double prediction = 0.0;
    for (std::size_t k = 0; k < design.cols(); ++k) prediction += theta[k] * design.column(k)[i];
    const double r = y[i] - prediction;
    objective += losses::huber(r, params);
    const double g = losses::huber_grad(r, params);
    for (std::size_t k = 0; k < design.cols(); ++k) grad[k] -= g * design.column(k)[i];
  }
  return objective;
}

double huber_objective_parallel(const DesignMatrix& design, std::span<const double> y,
                                std::span<const double> theta, double alpha,
                                std::span<double> grad, GradientWorkspace& workspace) {
  check_shapes(design, y, theta, grad);
  if (!std::isfinite(alpha) || !(alpha > 0.0)) {
    throw std::invalid_argument("huber_objective: alpha must be finite and > 0");
  }
  const std::size_t rows = design.rows();
  const std::size_t cols = design.cols();
  const std::size_t n_blocks = (rows + kBlockRows - 1) / kBlockRows;
  const std::size_t stride = cols + 1;  // gradient partials then objective
  workspace.residual.resize(rows);
  workspace.partials.assign(n_blocks * stride, 0.0);
  double* residual = workspace.residual.data();
  double* partials = workspace.partials.data();
  const double* x = design.data();
  const double* targets = y.data();
  const double* coeffs = theta.data();

#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (n_blocks > 1 && !omp_in_parallel())
#endif
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(n_blocks); ++b) {
    const std::size_t begin = static_cast<std::size_t>(b) * kBlockRows;
    const std::size_t end = std::min(rows, begin + kBlockRows);
    double* out = partials + static_cast<std::size_t>(b) * stride;

    for (std::size_t i = begin; i < end; ++i) residual[i] = targets[i];
    for (std::size_t k = 0; k < cols; ++k) {
      const double* col = x + k * rows;
      const double t = coeffs[k];
#pragma omp simd
      for (std::size_t i = begin; i < end; ++i) residual[i] -= t * col[i];
    }

    double objective = 0.0;
#pragma omp simd reduction(+ : objective)
    for (std::size_t i = begin; i < end; ++i) objective += huber_value(residual[i], alpha);
    out[cols] = objective;

    // From here on residual holds the Huber derivative (clamped residual).
#pragma omp simd
    for (std::size_t i = begin; i < end; ++i) residual[i] = clamp_residual(residual[i], alpha);

    for (std::size_t k = 0; k < cols; ++k) {
      const double* col = x + k * rows;
      double acc = 0.0;
#pragma omp simd reduction(+ : acc)
      for (std::size_t i = begin; i < end; ++i) acc += residual[i] * col[i];
      out[k] = -acc;
    }
  }

  std::fill(grad.begin(), grad.end(), 0.0);
  double objective = 0.0;
  for (std::size_t b = 0; b < n_blocks; ++b) {
    const double* in = partials + b * stride;
    for (std::size_t k = 0; k < cols; ++k) grad[k] += in[k];
    objective += in[cols];
  }
  return objective;
}

namespace {

SandwichViolation violation_at(double x, const losses::HuberParams& huber_params,
                               const losses::KlLossParams& lower,
                               const losses::KlLossParams& upper, double lower_scale) noexcept {
  const double h = losses::huber(x, huber_params);
  const double scale = std::max(1.0, h);
  return {(lower_scale * losses::kl_loss(x, lower) - h) / scale,
          (h - losses::kl_loss(x, upper)) / scale};
}

}  // namespace

SandwichViolation sandwich_violation_serial(std::span<const double> xs, double alpha,
                                            double lower_scale) {
  const losses::HuberParams huber_params(alpha);
  const auto lower = losses::lower_bound_params(alpha);
  const auto upper = losses::upper_bound_params(alpha);
  SandwichViolation worst{-std::numeric_limits<double>::infinity(),
                          -std::numeric_limits<double>::infinity()};
  for (double x : xs) {
    const auto v = violation_at(x, huber_params, lower, upper, lower_scale);
    worst.lower = std::max(worst.lower, v.lower);
    worst.upper = std::max(worst.upper, v.upper);
  }
  return worst;
}

SandwichViolation sandwich_violation_parallel(std::span<const double> xs, double alpha,
                                              double lower_scale) {
  const losses::HuberParams huber_params(alpha);
  const auto lower = losses::lower_bound_params(alpha);
  const auto upper = losses::upper_bound_params(alpha);
  double worst_lower = -std::numeric_limits<double>::infinity();
  double worst_upper = -std::numeric_limits<double>::infinity();
  const auto n = static_cast<std::ptrdiff_t>(xs.size());
  // max is exact and associative, so the reduction order does not matter.
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(max : worst_lower, worst_upper) \
    if (!omp_in_parallel())
#endif
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto v = violation_at(xs[static_cast<std::size_t>(i)], huber_params, lower, upper,
                                lower_scale);
    worst_lower = std::max(worst_lower, v.lower);
    worst_upper = std::max(worst_upper, v.upper);
  }
  return {worst_lower, worst_upper};
}

int max_threads() noexcept {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace robust_loss::kernels
