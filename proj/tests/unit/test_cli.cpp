#include "robust_loss/cli.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <filesystem>
#include <sstream>
#include <string>

namespace cli = robust_loss::cli;
namespace fs = std::filesystem;

namespace {

std::string config_error(const std::string& text, bool toyfit) {
  try {
    if (toyfit) {
      cli::parse_toyfit_config(text);
    } else {
      cli::parse_interp_config(text);
    }
  } catch (const cli::ConfigError& e) {
    return e.what();
  }
  return "";
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

}  // namespace

TEST(Format, SeventeenDigitsRoundTrip) {
  EXPECT_EQ(cli::format_double(0.0), "0");
  EXPECT_EQ(cli::format_double(-0.0), "0");
  EXPECT_EQ(cli::format_double(2.5), "2.5");
  EXPECT_EQ(cli::format_double(0.1), "0.10000000000000001");
  for (double v : {0.1, 1.0 / 3.0, -2.718281828459045, 1e-300}) {
    EXPECT_EQ(std::stod(cli::format_double(v)), v);
  }
}

TEST(LossTable, ZeroRowAndHandValue) {
  const auto rows = lines_of(cli::loss_table_csv(1.0, -5.0, 5.0, 11));
  ASSERT_EQ(rows.size(), 12u);
  EXPECT_EQ(rows[0], "x,huber,huber_grad,kl_lower,kl_lower_grad,kl_upper,kl_upper_grad");
  EXPECT_EQ(rows[6], "0,0,0,0,0,0,0");
  EXPECT_EQ(rows[9].substr(0, 8), "3,2.5,1,");
}

TEST(LossTable, RejectsBadRange) {
  EXPECT_THROW(cli::loss_table_csv(1.0, 5.0, -5.0, 11), cli::ConfigError);
  EXPECT_THROW(cli::loss_table_csv(1.0, -5.0, 5.0, 1), cli::ConfigError);
  EXPECT_THROW(cli::parse_loss_table_config(R"({"x_min": 1, "x_max": 1})"), cli::ConfigError);
}

TEST(LossTable, FileNamesCarryAlpha) {
  EXPECT_EQ(cli::loss_table_path("out/curves.csv", 0.1), fs::path("out/curves_alpha=0.1.csv"));
  EXPECT_EQ(cli::loss_table_path("curves.csv", 10.0), fs::path("curves_alpha=10.csv"));
}

TEST(LossTable, WritesOneFilePerAlpha) {
  const fs::path dir = fs::temp_directory_path() / "rll_loss_table_test";
  fs::remove_all(dir);
  cli::LossTableOptions opts;
  opts.n_points = 5;
  const auto written = cli::cmd_loss_table(opts, dir / "t.csv");
  ASSERT_EQ(written.size(), 3u);
  for (const auto& p : written) EXPECT_TRUE(fs::exists(p));
  fs::remove_all(dir);
}

TEST(Verify, ExitCodes) {
  std::ostringstream ok, bad;
  EXPECT_EQ(cli::cmd_verify(*robust_loss::verify::profile_by_name("default"), 42, {}, ok), 0);
  robust_loss::verify::FaultInjection faults;
  faults.lower_bound_scale = 2.0;
  EXPECT_EQ(cli::cmd_verify(*robust_loss::verify::profile_by_name("default"), 42, faults, bad), 1);
  EXPECT_NE(bad.str().find("FAILED: losses.bound_sandwich.lower"), std::string::npos);
  EXPECT_NE(ok.str().find("limit alpha=10"), std::string::npos);
}

TEST(ToyfitConfig, ErrorsCarryFieldPaths) {
  const std::string base = R"("noise_scales": [1], "lr_grid": [1e-6])";
  EXPECT_EQ(config_error("{" + base + R"(, "alpha_grid": [1, 2, -3]})", true),
            "alpha_grid[2]: must be > 0");
  EXPECT_EQ(config_error("{" + base + R"(, "alpha_grid": [1], "extra": 1})", true),
            "extra: unknown key");
  EXPECT_EQ(config_error(R"({"noise_scales": [1], "alpha_grid": [1]})", true),
            "lr_grid: is required");
  EXPECT_EQ(config_error("{" + base + R"(, "alpha_grid": [1], "noise_family": "pareto"})", true)
                .substr(0, 13),
            "noise_family:");
  EXPECT_EQ(config_error("{" + base + R"(, "alpha_grid": [1], "n_samples": 3})", true),
            "n_samples: must be >= fit_degree_count");
}

TEST(Toyfit, SingleCellEchoAndDeterminism) {
  cli::ToyfitRun run = cli::parse_toyfit_config(
      R"({"n_samples": 100, "noise_scales": [1.5], "alpha_grid": [2], "lr_grid": [1e-6],
          "iterations": 50, "repeats": 1, "seed": 7})");
  const auto a = cli::run_toyfit(run);
  const auto b = cli::run_toyfit(run);
  EXPECT_EQ(a.csv, b.csv);
  EXPECT_EQ(a.sidecar, b.sidecar);
  const auto rows = lines_of(a.csv);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], "noise_scale,repeat,optimal_alpha,best_lr,best_rmse");
  const auto& res = *a.curve[0].repeats[0].result;
  EXPECT_EQ(rows[1], "1.5,0,2," + cli::format_double(1e-6) + "," + cli::format_double(res.best_rmse));

  const auto sidecar = nlohmann::json::parse(a.sidecar);
  EXPECT_EQ(sidecar["config"]["seed"], 7);
  EXPECT_EQ(sidecar["sweep"][0]["repeats"][0]["cells"].size(), 1u);
}

TEST(Toyfit, AllDivergedRowsAreFlagged) {
  cli::ToyfitRun run = cli::parse_toyfit_config(
      R"({"n_samples": 50, "noise_scales": [1], "alpha_grid": [1], "lr_grid": [1e9],
          "iterations": 20, "repeats": 1})");
  const auto out = cli::run_toyfit(run);
  EXPECT_EQ(lines_of(out.csv)[1], "1,0,nan,nan,nan");
  const auto sidecar = nlohmann::json::parse(out.sidecar);
  EXPECT_EQ(sidecar["sweep"][0]["repeats"][0]["status"], "all_diverged");
  EXPECT_TRUE(sidecar["sweep"][0]["mean_optimal_alpha"].is_null());
}

TEST(InterpConfig, ParsesScalarsAndPerCoordinateValues) {
  const auto configs = cli::parse_interp_config(R"({"configs": [
      {"name": "mine", "loss_form": "alpha_scaled", "lambda": 1, "alpha": "1/9",
       "sigma": {"x": "1/10", "y": "1/10", "w": "1/5", "h": "1/5"}}]})");
  ASSERT_EQ(configs.size(), 1u);
  EXPECT_EQ(configs[0].coords[2].sigma, robust_loss::interp::Rational(1, 5));
  EXPECT_EQ(configs[0].coords[0].alpha, robust_loss::interp::Rational(1, 9));
  EXPECT_EQ(configs[0].coords[3].loss_form, robust_loss::interp::LossForm::AlphaScaled);
}

TEST(InterpConfig, ErrorsCarryFieldPaths) {
  EXPECT_EQ(config_error(R"({"configs": [{"name": "a", "lambda": 1, "alpha": 1, "sigma": 1,
                                          "beta": 2}]})", false),
            "configs[0].beta: unknown key");
  EXPECT_EQ(config_error(R"({"configs": [{"name": "a", "lambda": 1, "alpha": 1,
                                          "sigma": {"x": 1, "y": 1, "w": 1}}]})", false),
            "configs[0].sigma.h: is required");
  EXPECT_EQ(config_error(R"({"configs": [{"name": "a", "lambda": 1, "alpha": "0", "sigma": 1}]})",
                         false),
            "configs[0].alpha.x: must be > 0");
}

TEST(Interp, TrivialConfigAndFormatIndependence) {
  const auto configs = cli::parse_interp_config(
      R"({"configs": [{"name": "ones", "lambda": 1, "alpha": 1, "sigma": 1}]})");
  const auto csv = lines_of(cli::cmd_interp(configs, cli::TableFormat::Csv));
  ASSERT_EQ(csv.size(), 9u);
  EXPECT_EQ(csv[0], "row,ones");
  EXPECT_EQ(csv[1], "x*,w_a");
  EXPECT_EQ(csv[8], "h~,h_a");

  const auto presets = *cli::preset_by_name("paper-table1");
  const auto json = nlohmann::json::parse(cli::cmd_interp(presets, cli::TableFormat::Json));
  const auto rows = lines_of(cli::cmd_interp(presets, cli::TableFormat::Csv));
  for (std::size_t c = 0; c < presets.size(); ++c) {
    for (std::size_t r = 0; r < 8; ++r) {
      const std::string cell = json["columns"][c]["rows"][r]["value"];
      std::istringstream ss(rows[r + 1]);
      std::string field;
      for (std::size_t k = 0; k <= c + 1; ++k) std::getline(ss, field, ',');
      EXPECT_EQ(cell, field);
    }
  }
  EXPECT_FALSE(cli::preset_by_name("nope"));
  EXPECT_EQ(cli::parse_table_format("markdown"), cli::TableFormat::Markdown);
  EXPECT_FALSE(cli::parse_table_format("xml"));
}
