#include "robust_loss/interp.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ip = robust_loss::interp;
using ip::Rational;

namespace {

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

ip::BoxRegressionConfig uniform_config(Rational lambda, Rational alpha, Rational sigma,
                                       ip::LossForm form) {
  ip::BoxRegressionConfig cfg;
  cfg.name = "uniform";
  const ip::Coordinate order[] = {ip::Coordinate::CenterX, ip::Coordinate::CenterY,
                                  ip::Coordinate::Width, ip::Coordinate::Height};
  for (std::size_t i = 0; i < 4; ++i) {
    cfg.coords[i].lambda = lambda;
    cfg.coords[i].alpha = alpha;
    cfg.coords[i].sigma = sigma;
    cfg.coords[i].loss_form = form;
    cfg.coords[i].coordinate = order[i];
  }
  return cfg;
}

}  // namespace

TEST(Interp, PresetsReproduceGoldenTable) {
  const auto golden = read_csv(std::string(TEST_DATA_DIR) + "/interpretation_table.csv");
  const auto presets = ip::published_presets();
  ASSERT_EQ(golden.size(), 9u);
  ASSERT_EQ(presets.size(), 10u);
  for (std::size_t c = 0; c < presets.size(); ++c) {
    EXPECT_EQ(golden[0][c + 1], presets[c].name);
    const auto table = ip::interpret_config(presets[c]);
    for (std::size_t r = 0; r < 8; ++r) {
      EXPECT_EQ(golden[r + 1][0], ip::kRowLabels[r]);
      EXPECT_EQ(table.rows[r].render(), golden[r + 1][c + 1])
          << presets[c].name << " " << ip::kRowLabels[r];
    }
  }
}

TEST(Interp, AllOnesRawGivesAnchorScales) {
  const auto table =
      ip::interpret_config(uniform_config(Rational(1), Rational(1), Rational(1), ip::LossForm::Raw));
  for (std::size_t r = 0; r < 8; ++r) {
    const bool height = r % 4 == 1 || r % 4 == 3;
    EXPECT_EQ(table.rows[r].render(), height ? "h_a" : "w_a");
  }
}

TEST(Interp, EffectiveWeight) {
  ip::CoordinateLossSpec spec;
  spec.lambda = Rational(2);
  spec.alpha = Rational(1, 4);
  EXPECT_EQ(ip::effective_weight(spec), Rational(2));
  spec.loss_form = ip::LossForm::AlphaScaled;
  EXPECT_EQ(ip::effective_weight(spec), Rational(8));
}

TEST(Interp, HandDerivedCoordinate) {
  // label = alpha sigma, prediction = sigma / (alpha w_eff), in anchor units.
  ip::CoordinateLossSpec spec;
  spec.lambda = Rational(3);
  spec.alpha = Rational(1, 2);
  spec.sigma = Rational(1, 5);
  spec.coordinate = ip::Coordinate::Height;
  const auto ci = ip::interpret_coordinate(spec);
  EXPECT_EQ(ci.label.coefficient, Rational(1, 10));
  EXPECT_EQ(ci.prediction.coefficient, Rational(2, 15));
  EXPECT_EQ(ci.label.anchor, ip::AnchorDim::AnchorHeight);
  EXPECT_TRUE(ci.has_log_domain);
  EXPECT_EQ(ci.label_log, Rational(1, 10));
}

TEST(Interp, UpperBoundHalvesLabelOnly) {
  const auto cfg = uniform_config(Rational(1), Rational(1, 3), Rational(1), ip::LossForm::Raw);
  const auto lo = ip::interpret_config(cfg, ip::BoundConvention::Lower);
  const auto up = ip::interpret_config(cfg, ip::BoundConvention::Upper);
  EXPECT_EQ(up.rows[0].coefficient, lo.rows[0].coefficient / Rational(2));
  EXPECT_EQ(up.rows[4].coefficient, lo.rows[4].coefficient);
}

TEST(Interp, Rendering) {
  EXPECT_EQ((ip::UncertaintyScale{Rational(1), ip::AnchorDim::AnchorWidth}).render(), "w_a");
  EXPECT_EQ((ip::UncertaintyScale{Rational(2, 5), ip::AnchorDim::AnchorWidth}).render(), "2*w_a/5");
  EXPECT_EQ((ip::UncertaintyScale{Rational(10), ip::AnchorDim::AnchorHeight}).render(), "10*h_a");
  EXPECT_EQ((ip::UncertaintyScale{Rational(1, 9), ip::AnchorDim::AnchorHeight}).render(), "h_a/9");
}

TEST(Interp, Validation) {
  auto cfg = uniform_config(Rational(1), Rational(0), Rational(1), ip::LossForm::Raw);
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = uniform_config(Rational(1), Rational(1), Rational(1), ip::LossForm::Raw);
  std::swap(cfg.coords[0], cfg.coords[2]);
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Interp, LogTargetApproximation) {
  const double e = ip::log_target_approx_error(0.7, 1.4, 100001);
  const double endpoint = std::fmax(std::fabs(std::log(0.7) + 0.3), std::fabs(std::log(1.4) - 0.4));
  EXPECT_NEAR(e, endpoint, 1e-12);
  EXPECT_LT(e, 0.07);
}
