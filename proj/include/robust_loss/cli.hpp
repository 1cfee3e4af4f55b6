#pragma once

#include "robust_loss/interp.hpp"
#include "robust_loss/toyfit.hpp"
#include "robust_loss/verify.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

// Command implementations behind the robust-loss-lab executable. They are
// plain functions over streams and paths so the tests can drive them
// in-process.

namespace robust_loss::cli {

/// Invalid run configuration. what() starts with the JSON path of the
/// offending field, e.g. "alpha_grid[2]: must be > 0".
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 17 significant digits, '.' decimal separator, no locale.
std::string format_double(double v);

// ---- loss-table ----------------------------------------------------------

struct LossTableOptions {
  std::vector<double> alphas{0.1, 1.0, 10.0};
  double x_min = -5.0;
  double x_max = 5.0;
  std::size_t n_points = 1001;

  void validate() const;
};

LossTableOptions parse_loss_table_config(std::string_view json_text);

/// CSV with header x,huber,huber_grad,kl_lower,kl_lower_grad,kl_upper,kl_upper_grad.
std::string loss_table_csv(double alpha, double x_min, double x_max, std::size_t n_points);

/// "<stem>_alpha=<alpha><ext>" next to `out`.
std::filesystem::path loss_table_path(const std::filesystem::path& out, double alpha);

/// Writes one file per alpha; returns the paths written.
std::vector<std::filesystem::path> cmd_loss_table(const LossTableOptions& options,
                                                  const std::filesystem::path& out);

// ---- verify --------------------------------------------------------------

/// Prints one line per check and the tightness residuals; returns 0 when
/// every check passes, 1 otherwise.
int cmd_verify(const verify::ToleranceProfile& profile, std::uint64_t seed,
               const verify::FaultInjection& faults, std::ostream& out);

// ---- toyfit --------------------------------------------------------------

struct ToyfitRun {
  toyfit::ToyConfig base;
  std::vector<double> noise_scales;
  std::vector<double> alpha_grid;
  std::vector<double> lr_grid;
  std::size_t iterations = 20000;
  std::size_t repeats = 5;
};

ToyfitRun parse_toyfit_config(std::string_view json_text);

struct ToyfitOutput {
  std::vector<toyfit::SweepPoint> curve;
  std::string csv;      // noise_scale,repeat,optimal_alpha,best_lr,best_rmse
  std::string sidecar;  // JSON with the full grid table per repeat
};

ToyfitOutput run_toyfit(const ToyfitRun& run);

/// Writes `out` and `out` + ".json".
ToyfitOutput cmd_toyfit(const std::filesystem::path& config_path,
                        const std::filesystem::path& out,
                        std::optional<std::uint64_t> seed_override = std::nullopt);

// ---- interp --------------------------------------------------------------

enum class TableFormat { Csv, Json, Markdown };

std::optional<TableFormat> parse_table_format(std::string_view name) noexcept;

std::vector<interp::BoxRegressionConfig> parse_interp_config(std::string_view json_text);

/// Known presets: "paper-table1".
std::optional<std::vector<interp::BoxRegressionConfig>> preset_by_name(std::string_view name);

std::string render_interp(const std::vector<interp::InterpretationTable>& tables,
                          TableFormat format);

std::string cmd_interp(const std::vector<interp::BoxRegressionConfig>& configs,
                       TableFormat format,
                       interp::BoundConvention bound = interp::BoundConvention::Lower);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace robust_loss::cli
