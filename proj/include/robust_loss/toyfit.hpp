#pragma once

#include "robust_loss/distributions.hpp"
#include "robust_loss/losses.hpp"

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

// Polynomial-fitting experiment: a known polynomial plus controlled label
// noise, fitted by full-batch gradient descent on the summed Huber loss.
// Sweeping the noise scale and grid-searching the Huber transition point
// shows how the best transition point tracks the noise scale.

namespace robust_loss::toyfit {

/// coeffs[k] multiplies x^k.
class PolyModel {
 public:
  explicit PolyModel(std::vector<double> coeffs);

  std::span<const double> coeffs() const noexcept { return coeffs_; }
  std::size_t degree() const noexcept { return coeffs_.size() - 1; }

 private:
  std::vector<double> coeffs_;
};

/// 6x^5 - 3x^4 - 25x^3 + 15x^2 + 20x - 10, the reference ground truth.
PolyModel reference_polynomial();

double poly_eval(const PolyModel& m, double x) noexcept;

struct ToyConfig {
  PolyModel theta_star = reference_polynomial();
  std::size_t fit_degree_count = 8;  // K, number of fitted coefficients
  std::size_t n_samples = 2000;      // N
  double delta = 2.0;                // covariates drawn from [-delta, delta]
  distributions::NoiseSpec noise{distributions::NoiseFamily::Laplace, 1.0};
  std::uint64_t seed = 42;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

enum class Init { Zeros };

struct FitSettings {
  losses::HuberParams loss{1.0};
  double learning_rate = 1e-7;
  std::size_t iterations = 20000;
  Init init = Init::Zeros;

  void validate() const;
};

struct Dataset {
  std::vector<double> x;
  std::vector<double> y;

  std::size_t size() const noexcept { return x.size(); }
};

enum class Split { Train, Test };

/// x_i uniform on [-delta, delta] from `x_rng`; y_i = F(x_i) plus one noise
/// draw from `noise_rng` when given, no noise otherwise.
Dataset synthesize(const ToyConfig& cfg, distributions::RngState x_rng,
                   std::optional<distributions::RngState> noise_rng);

/// Train draws its covariates and noise from substreams 0 and 2 of the seed;
/// Test draws covariates from substream 1 and adds no noise.
Dataset make_dataset(const ToyConfig& cfg, Split split);

/// Thrown when gradient descent leaves the finite range or the objective
/// blows up past kBlowupFactor times its starting value.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(std::size_t iteration, const std::string& what)
      : std::runtime_error(what), iteration_(iteration) {}
  std::size_t iteration() const noexcept { return iteration_; }

 private:
  std::size_t iteration_;
};

inline constexpr double kBlowupFactor = 1e6;

struct FitTrace {
  double initial_objective = 0.0;
  double final_objective = 0.0;
};

PolyModel fit(const Dataset& train, std::size_t n_coeffs, const FitSettings& settings,
              FitTrace* trace = nullptr);

double rmse(const PolyModel& m, const Dataset& test);

struct GridCell {
  double alpha = 0.0;
  double learning_rate = 0.0;
  double rmse = std::numeric_limits<double>::infinity();
  std::optional<std::size_t> diverged_at;
};

struct GridSearchResult {
  double best_alpha = 0.0;
  double best_lr = 0.0;
  double best_rmse = 0.0;
  std::vector<GridCell> table;  // ordered by (alpha, learning_rate)
};

class AllDivergedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fits every (alpha, lr) cell on Train and scores it on Test. Diverged cells
/// score +inf. Ties go to the smallest alpha, then the smallest lr.
GridSearchResult grid_search(const ToyConfig& cfg, std::span<const double> alpha_grid,
                             std::span<const double> lr_grid, std::size_t iterations);

struct RepeatOutcome {
  std::uint64_t seed = 0;
  std::optional<GridSearchResult> result;  // empty when every cell diverged
};

struct SweepPoint {
  double noise_scale = 0.0;
  double mean_optimal_alpha = 0.0;  // NaN when every repeat diverged
  std::vector<RepeatOutcome> repeats;
};

/// Repeat r runs with seed split(base.seed, r) at every noise scale, so all
/// scales see the same covariates and unit noise draws.
std::vector<SweepPoint> noise_sweep(const ToyConfig& base, std::span<const double> noise_scales,
                                    std::span<const double> alpha_grid,
                                    std::span<const double> lr_grid, std::size_t iterations,
                                    std::size_t repeats);

/// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> a, std::span<const double> b);

}  // namespace robust_loss::toyfit
