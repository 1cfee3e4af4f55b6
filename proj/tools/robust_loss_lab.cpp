#include "robust_loss/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace cli = robust_loss::cli;

int main(int argc, char** argv) {
  CLI::App app{"Huber / KL-Laplace loss laboratory"};
  app.require_subcommand(1);

  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;

  auto* loss_table = app.add_subcommand("loss-table", "Write loss and gradient curves as CSV");
  loss_table->add_option("--config", config, "JSON with alphas, x_min, x_max, n_points");
  loss_table->add_option("--out", out, "Output CSV path; one file per alpha")->required();

  std::string profile_name = "default";
  double lower_scale = 1.0;
  std::uint64_t verify_seed = 42;
  auto* verify = app.add_subcommand("verify", "Run the bound and derivative checks");
  verify->add_option("--profile", profile_name, "Tolerance profile: default or relaxed");
  verify->add_option("--seed", verify_seed, "Seed for sampled cases");
  verify->add_option("--inject-lower-bound-scale", lower_scale)->group("");

  auto* toyfit = app.add_subcommand("toyfit", "Noise-scale sweep of the polynomial toy fit");
  toyfit->add_option("--config", config, "JSON run configuration")->required();
  toyfit->add_option("--out", out, "Output CSV path; a .json sidecar is written next to it")
      ->required();
  toyfit->add_option("--seed", seed, "Override the seed in the config");

  std::string preset;
  std::string format_name = "markdown";
  std::string bound_name = "lower";
  auto* interp = app.add_subcommand("interp", "Interpret box-regression loss settings");
  auto* preset_opt = interp->add_option("--preset", preset, "Built-in configs: paper-table1");
  interp->add_option("--config", config, "JSON with a configs array")->excludes(preset_opt);
  interp->add_option("--format", format_name, "csv, json or markdown");
  interp->add_option("--bound", bound_name, "KL-Laplace stand-in for Huber: lower or upper");
  interp->add_option("--out", out, "Write to a file instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*loss_table) {
      const auto options =
          config.empty() ? cli::LossTableOptions{} : cli::parse_loss_table_config(cli::read_file(config));
      for (const auto& path : cli::cmd_loss_table(options, out)) std::cout << path.string() << '\n';
      return 0;
    }
    if (*verify) {
      const auto profile = robust_loss::verify::profile_by_name(profile_name);
      if (!profile) {
        std::cerr << "unknown profile: " << profile_name << '\n';
        return 2;
      }
      robust_loss::verify::FaultInjection faults;
      faults.lower_bound_scale = lower_scale;
      return cli::cmd_verify(*profile, verify_seed, faults, std::cout);
    }
    if (*toyfit) {
      const auto result = cli::cmd_toyfit(config, out, seed);
      for (const auto& point : result.curve) {
        std::cout << "scale " << cli::format_double(point.noise_scale) << " mean_optimal_alpha "
                  << cli::format_double(point.mean_optimal_alpha) << '\n';
      }
      return 0;
    }
    if (*interp) {
      const auto format = cli::parse_table_format(format_name);
      if (!format) {
        std::cerr << "unknown format: " << format_name << '\n';
        return 2;
      }
      robust_loss::interp::BoundConvention bound;
      if (bound_name == "lower") {
        bound = robust_loss::interp::BoundConvention::Lower;
      } else if (bound_name == "upper") {
        bound = robust_loss::interp::BoundConvention::Upper;
      } else {
        std::cerr << "unknown bound: " << bound_name << '\n';
        return 2;
      }
      std::vector<robust_loss::interp::BoxRegressionConfig> configs;
      if (!preset.empty()) {
        auto found = cli::preset_by_name(preset);
        if (!found) {
          std::cerr << "unknown preset: " << preset << '\n';
          return 2;
        }
        configs = std::move(*found);
      } else if (!config.empty()) {
        configs = cli::parse_interp_config(cli::read_file(config));
      } else {
        std::cerr << "interp needs --preset or --config\n";
        return 2;
      }
      const std::string text = cli::cmd_interp(configs, *format, bound);
      if (out.empty()) {
        std::cout << text;
      } else {
        cli::write_file(out, text);
      }
      return 0;
    }
  } catch (const cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
