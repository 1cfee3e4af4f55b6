#pragma once

#include <cstddef>
#include <span>
#include <vector>

// Data-parallel inner loops of the toy experiment and the bound checks.
//
// Every kernel has a plain serial reference (`*_serial`) that the tests hold
// the OpenMP version against. The OpenMP versions split the rows into fixed
// blocks of kBlockRows and combine per-block partial results in block order,
// so their output is bit-identical for any thread count.

namespace robust_loss::kernels {

inline constexpr std::size_t kBlockRows = 256;

/// Column-major Vandermonde matrix: column k holds x_i^k.
class DesignMatrix {
 public:
  DesignMatrix(std::span<const double> x, std::size_t n_cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::span<const double> column(std::size_t k) const noexcept {
    return {values_.data() + k * rows_, rows_};
  }
  const double* data() const noexcept { return values_.data(); }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> values_;
};

/// Scratch space reused across gradient evaluations.
struct GradientWorkspace {
  std::vector<double> residual;
  std::vector<double> partials;
};

/// Evaluates sum_i H_alpha(y_i - (X theta)_i) and writes its gradient with
/// respect to theta into `grad`. Returns the objective.
double huber_objective_serial(const DesignMatrix& design, std::span<const double> y,
                              std::span<const double> theta, double alpha,
                              std::span<double> grad);

double huber_objective_parallel(const DesignMatrix& design, std::span<const double> y,
                                std::span<const double> theta, double alpha,
                                std::span<double> grad, GradientWorkspace& workspace);

/// Largest relative violation of D_{alpha,1/alpha} <= H_alpha <=
/// D_{alpha/2,1/alpha} over `xs`, measured as
/// max(lower - huber, huber - upper) / max(1, huber). Non-positive when the
/// sandwich holds. `lower_scale` multiplies the lower bound and exists for
/// fault injection.
struct SandwichViolation {
  double lower = 0.0;
  double upper = 0.0;
};

SandwichViolation sandwich_violation_serial(std::span<const double> xs, double alpha,
                                            double lower_scale = 1.0);
SandwichViolation sandwich_violation_parallel(std::span<const double> xs, double alpha,
                                              double lower_scale = 1.0);

/// Number of OpenMP threads the parallel kernels would use (1 without OpenMP).
int max_threads() noexcept;

}  // namespace robust_loss::kernels
