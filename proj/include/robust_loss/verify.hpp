#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Numerical invariant suite for the losses and divergence modules: bound
// sandwich, tightness limits, finite-difference derivative checks, scaling
// identities, and the closed-form KL against quadrature.

namespace robust_loss::verify {

struct ToleranceProfile {
  std::string name = "default";
  double sandwich = 1e-12;         // relative to max(1, huber)
  double tightness = 1e-10;        // times max(1, alpha^2)
  double gradient_fd = 1e-5;       // relative
  double hessian_fd = 1e-4;        // relative
  double hessian_at_zero_fd = 1e-4;
  double second_order = 0.1;       // relative, |x| < alpha/10
  double rescale = 1e-12;          // relative
  double kl_quadrature = 1e-7;     // times max(1, kl)
  double kl_identity = 1e-14;      // relative to max(1, |cross entropy|)
  double kl_nonneg = 1e-14;
  double loss_linkage = 1e-14;     // relative
  std::size_t sandwich_points = 100001;
  std::size_t quadrature_cases = 100;
};

/// "default" (the stated tolerances) or "relaxed" (ten times looser).
std::optional<ToleranceProfile> profile_by_name(std::string_view name);

/// Deliberate perturbations used to check that the suite can fail.
struct FaultInjection {
  double lower_bound_scale = 1.0;  // multiplies D_{alpha,1/alpha} in the sandwich
};

struct CheckResult {
  std::string name;
  double max_violation = 0.0;  // the statistic compared against tolerance
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

struct Report {
  std::vector<CheckResult> checks;
  /// Tightness residuals at x = 50 alpha: (alpha, upper - huber,
  /// huber - lower - alpha^2/2).
  struct Limit {
    double alpha;
    double upper_gap;
    double lower_gap;
  };
  std::vector<Limit> limits;

  bool passed() const;
  const CheckResult* first_failure() const;
};

Report run_all(const ToleranceProfile& profile, std::uint64_t seed = 42,
               const FaultInjection& faults = {});

}  // namespace robust_loss::verify
