#include "robust_loss/interp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace robust_loss::interp {

std::string_view to_string(Coordinate c) noexcept {
  switch (c) {
    case Coordinate::CenterX: return "x";
    case Coordinate::CenterY: return "y";
    case Coordinate::Width: return "w";
    case Coordinate::Height: return "h";
  }
  return "x";
}

std::string_view to_string(LossForm f) noexcept {
  return f == LossForm::Raw ? "raw" : "alpha_scaled";
}

AnchorDim anchor_of(Coordinate c) noexcept {
  return (c == Coordinate::CenterX || c == Coordinate::Width) ? AnchorDim::AnchorWidth
                                                              : AnchorDim::AnchorHeight;
}

void CoordinateLossSpec::validate() const {
  const Rational zero{0};
  const std::string where = std::string(to_string(coordinate)) + ".";
  if (!(lambda > zero)) throw std::invalid_argument(where + "lambda: must be > 0");
  if (!(alpha > zero)) throw std::invalid_argument(where + "alpha: must be > 0");
  if (!(sigma > zero)) throw std::invalid_argument(where + "sigma: must be > 0");
}

void BoxRegressionConfig::validate() const {
  constexpr std::array order{Coordinate::CenterX, Coordinate::CenterY, Coordinate::Width,
                             Coordinate::Height};
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i].coordinate != order[i]) {
      throw std::invalid_argument(name + ": coordinates must be ordered x, y, w, h");
    }
    coords[i].validate();
  }
}

std::string UncertaintyScale::render() const {
  const std::string dim = anchor == AnchorDim::AnchorWidth ? "w_a" : "h_a";
  std::string out;
  if (coefficient.num() == -1) {
    out = "-" + dim;
  } else if (coefficient.num() != 1) {
    out = std::to_string(coefficient.num()) + "*" + dim;
  } else {
    out = dim;
  }
  if (coefficient.den() != 1) out += "/" + std::to_string(coefficient.den());
  return out;
}

Rational effective_weight(const CoordinateLossSpec& spec) {
  return spec.loss_form == LossForm::Raw ? spec.lambda : spec.lambda / spec.alpha;
}

ResidualScale residual_gamma(const CoordinateLossSpec& spec) {
  spec.validate();
  return {Rational{1} / spec.sigma, anchor_of(spec.coordinate)};
}

CoordinateInterpretation interpret_coordinate(const CoordinateLossSpec& spec,
                                              BoundConvention bound) {
  spec.validate();
  // lambda_eff * H_alpha(gamma x) with gamma = 1/(sigma a) maps to
  // D_{alpha/gamma, 1/(alpha gamma lambda_eff)}; mu only shifts the mean.
  const Rational weight = effective_weight(spec);
  const Rational bound_factor = bound == BoundConvention::Lower ? Rational{1} : Rational{1, 2};
  const Rational label = bound_factor * spec.alpha * spec.sigma;
  const Rational prediction = spec.sigma / (spec.alpha * weight);
  const AnchorDim anchor = anchor_of(spec.coordinate);

  CoordinateInterpretation out;
  out.label = {label, anchor};
  out.prediction = {prediction, anchor};
  if (spec.coordinate == Coordinate::Width || spec.coordinate == Coordinate::Height) {
    out.has_log_domain = true;
    out.label_log = label;
    out.prediction_log = prediction;
  }
  return out;
}

InterpretationTable interpret_config(const BoxRegressionConfig& cfg, BoundConvention bound) {
  cfg.validate();
  InterpretationTable table;
  table.name = cfg.name;
  for (std::size_t i = 0; i < 4; ++i) {
    table.coords[i] = interpret_coordinate(cfg.coords[i], bound);
    table.rows[i] = table.coords[i].label;
    table.rows[i + 4] = table.coords[i].prediction;
  }
  return table;
}

namespace {

BoxRegressionConfig make_config(std::string name, Rational lambda, Rational alpha,
                                Rational sigma_center, Rational sigma_size, LossForm form) {
  BoxRegressionConfig cfg;
  cfg.name = std::move(name);
  constexpr std::array order{Coordinate::CenterX, Coordinate::CenterY, Coordinate::Width,
                             Coordinate::Height};
  for (std::size_t i = 0; i < 4; ++i) {
    const bool center = i < 2;
    cfg.coords[i] = {lambda, alpha, center ? sigma_center : sigma_size, Rational{0}, form,
                     order[i]};
  }
  return cfg;
}

}  // namespace

std::vector<BoxRegressionConfig> published_presets() {
  using R = Rational;
  // The publication weights the plain Huber loss; the reference
  // implementation and the experiments built on it divide by alpha.
  return {
      make_config("Publication/Proposal", R{10}, R{1}, R{1}, R{1}, LossForm::Raw),
      make_config("Publication/Detection", R{10}, R{1}, R{1}, R{1}, LossForm::Raw),
      make_config("Implementation/Proposal", R{1}, R{1, 9}, R{1}, R{1}, LossForm::AlphaScaled),
      make_config("Implementation/Detection", R{1}, R{1}, R{1, 10}, R{1, 5}, LossForm::AlphaScaled),
      make_config("ExperimentA/Proposal", R{1, 4}, R{1}, R{1, 20}, R{1, 10}, LossForm::AlphaScaled),
      make_config("ExperimentA/Detection", R{1, 2}, R{1}, R{1, 20}, R{1, 10}, LossForm::AlphaScaled),
      make_config("ExperimentB/Proposal", R{1, 2}, R{1}, R{1, 20}, R{1, 10}, LossForm::AlphaScaled),
      make_config("ExperimentB/Detection", R{1}, R{1}, R{1, 20}, R{1, 10}, LossForm::AlphaScaled),
      make_config("ExperimentC/Proposal", R{1, 4}, R{1}, R{1, 20}, R{1, 10}, LossForm::AlphaScaled),
      make_config("ExperimentC/Detection", R{1}, R{1}, R{1, 20}, R{1, 10}, LossForm::AlphaScaled),
  };
}

double log_target_approx_error(double ratio_lo, double ratio_hi, std::size_t n_grid) {
  if (!(ratio_lo > 0.0) || !(ratio_lo <= ratio_hi) || !std::isfinite(ratio_hi)) {
    throw std::invalid_argument("log_target_approx_error: need 0 < ratio_lo <= ratio_hi");
  }
  if (n_grid < 1) throw std::invalid_argument("log_target_approx_error: n_grid must be >= 1");
  double worst = 0.0;
  const double step = n_grid > 1 ? (ratio_hi - ratio_lo) / static_cast<double>(n_grid - 1) : 0.0;
  for (std::size_t i = 0; i < n_grid; ++i) {
    const double r = (n_grid > 1 && i + 1 == n_grid) ? ratio_hi : ratio_lo + step * static_cast<double>(i);
    worst = std::max(worst, std::fabs(std::log(r) - (r - 1.0)));
  }
  return worst;
}

}  // namespace robust_loss::interp
