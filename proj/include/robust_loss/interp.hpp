#pragma once

#include "robust_loss/rational.hpp"

#include <array>
#include <string>
#include <string_view>
#include <vector>

// Reads a detector's box-regression loss hyper-parameters as Laplace noise
// scales. A weighted Huber loss on normalized targets,
//
//     w_eff * H_alpha((x~ - x*) / (sigma * a)),
//
// is approximated by the KL-Laplace loss D_{alpha sigma a, sigma a / (alpha w_eff)}
// on the raw displacement, where a is the anchor width or height. The first
// subscript is the label-noise scale and the second the prediction-noise
// scale. Size targets are log-ratios and go through log r ~ r - 1 first.
//
// All arithmetic is exact; anchor dimensions stay symbolic.

namespace robust_loss::interp {

enum class Coordinate { CenterX, CenterY, Width, Height };
enum class LossForm { Raw, AlphaScaled };
enum class AnchorDim { AnchorWidth, AnchorHeight };

/// Which KL-Laplace configuration stands in for H_alpha: the lower bound
/// D_{alpha,1/alpha} (default) or the upper bound D_{alpha/2,1/alpha}.
enum class BoundConvention { Lower, Upper };

std::string_view to_string(Coordinate c) noexcept;
std::string_view to_string(LossForm f) noexcept;

AnchorDim anchor_of(Coordinate c) noexcept;

struct CoordinateLossSpec {
  Rational lambda{1};
  Rational alpha{1};
  Rational sigma{1};
  Rational mu{0};
  LossForm loss_form = LossForm::Raw;
  Coordinate coordinate = Coordinate::CenterX;

  /// lambda, alpha and sigma must be > 0.
  void validate() const;
};

/// One named configuration: specs for x, y, w, h in that order.
struct BoxRegressionConfig {
  std::string name;
  std::array<CoordinateLossSpec, 4> coords;

  void validate() const;
};

/// coefficient * anchor dimension.
struct UncertaintyScale {
  Rational coefficient;
  AnchorDim anchor = AnchorDim::AnchorWidth;

  /// "w_a", "w_a/9", "2*w_a/5", "10*h_a".
  std::string render() const;

  friend bool operator==(const UncertaintyScale&, const UncertaintyScale&) = default;
};

/// Target-space residual per unit of displacement: the residual equals
/// coefficient * (displacement / anchor).
struct ResidualScale {
  Rational coefficient;
  AnchorDim anchor = AnchorDim::AnchorWidth;
};

struct CoordinateInterpretation {
  UncertaintyScale label;
  UncertaintyScale prediction;
  /// Size coordinates only: scales of the exact log-domain reading
  /// D_{label_log, prediction_log}(log w~ - log w*), dimensionless.
  bool has_log_domain = false;
  Rational label_log;
  Rational prediction_log;
};

/// lambda (Raw) or lambda / alpha (AlphaScaled).
Rational effective_weight(const CoordinateLossSpec& spec);

/// 1 / sigma. Exact for centers; for sizes it relies on log r ~ r - 1.
ResidualScale residual_gamma(const CoordinateLossSpec& spec);

CoordinateInterpretation interpret_coordinate(const CoordinateLossSpec& spec,
                                              BoundConvention bound = BoundConvention::Lower);

inline constexpr std::array<std::string_view, 8> kRowLabels{"x*", "y*", "w*", "h*",
                                                            "x~", "y~", "w~", "h~"};

struct InterpretationTable {
  std::string name;
  std::array<UncertaintyScale, 8> rows;  // labels x*, y*, w*, h* then predictions
  std::array<CoordinateInterpretation, 4> coords;
};

InterpretationTable interpret_config(const BoxRegressionConfig& cfg,
                                     BoundConvention bound = BoundConvention::Lower);

/// The five published hyper-parameter settings (publication, reference
/// implementation, experiments A-C), each for the proposal and detection
/// stages: ten configurations named like "Implementation/Proposal".
std::vector<BoxRegressionConfig> published_presets();

/// max |log r - (r - 1)| over n_grid evenly spaced r in [ratio_lo, ratio_hi].
double log_target_approx_error(double ratio_lo, double ratio_hi, std::size_t n_grid);

}  // namespace robust_loss::interp
