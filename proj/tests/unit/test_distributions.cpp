#include "robust_loss/distributions.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace ds = robust_loss::distributions;

namespace {

// kind -> values in index order, from tests/data/rng_seed42.csv.
std::map<std::string, std::vector<std::string>> load_golden() {
  std::ifstream in(std::string(TEST_DATA_DIR) + "/rng_seed42.csv");
  std::map<std::string, std::vector<std::string>> out;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string kind, index, value;
    std::getline(ss, kind, ',');
    std::getline(ss, index, ',');
    std::getline(ss, value, ',');
    out[kind].push_back(value);
  }
  return out;
}

}  // namespace

TEST(Rng, RawDrawsMatchGolden) {
  const auto golden = load_golden();
  ASSERT_EQ(golden.at("u64").size(), 16u);
  ds::RngState rng(42);
  for (const auto& v : golden.at("u64")) EXPECT_EQ(rng.next_u64(), std::stoull(v));
  EXPECT_EQ(rng.counter(), 16u);
}

TEST(Rng, SplitKeysMatchGolden) {
  const auto golden = load_golden();
  const ds::RngState root(42);
  for (std::size_t i = 0; i < golden.at("split_key").size(); ++i) {
    EXPECT_EQ(root.split(i).seed(), std::stoull(golden.at("split_key")[i]));
  }
}

TEST(Rng, NoiseDrawsMatchGolden) {
  const auto golden = load_golden();
  for (auto family : {ds::NoiseFamily::Laplace, ds::NoiseFamily::Logistic,
                      ds::NoiseFamily::Cauchy, ds::NoiseFamily::Gaussian}) {
    const auto& values = golden.at(std::string(ds::to_string(family)));
    ASSERT_EQ(values.size(), 16u);
    ds::RngState rng(42);
    for (const auto& v : values) {
      const double want = std::stod(v);
      EXPECT_NEAR(ds::sample_unit_noise(family, rng), want, 4e-16 * std::fmax(1.0, std::fabs(want)))
          << ds::to_string(family);
    }
  }
}

TEST(Rng, SplitIsIndependentOfParentPosition) {
  ds::RngState a(9);
  const auto before = a.split(3).seed();
  a.next_u64();
  EXPECT_EQ(a.split(3).seed(), before);
  EXPECT_NE(a.split(3).seed(), a.split(4).seed());
}

TEST(Noise, NoneAndZeroScaleLeaveStreamUntouched) {
  ds::RngState rng(1);
  EXPECT_EQ(ds::sample_noise({ds::NoiseFamily::None, 3.0}, rng), 0.0);
  EXPECT_EQ(ds::sample_noise({ds::NoiseFamily::Cauchy, 0.0}, rng), 0.0);
  EXPECT_EQ(rng.counter(), 0u);
}

TEST(Noise, ScaleMultipliesUnitDraw) {
  ds::RngState a(5), b(5);
  EXPECT_DOUBLE_EQ(ds::sample_noise({ds::NoiseFamily::Laplace, 2.5}, a),
                   2.5 * ds::sample_unit_noise(ds::NoiseFamily::Laplace, b));
}

TEST(Noise, SampleMoments) {
  constexpr int n = 200000;
  ds::RngState rng(2024);
  double s_lap = 0, s_log = 0, s_gau = 0, abs_cauchy_median_count = 0;
  for (int i = 0; i < n; ++i) {
    const double l = ds::sample_unit_noise(ds::NoiseFamily::Laplace, rng);
    const double g = ds::sample_unit_noise(ds::NoiseFamily::Logistic, rng);
    const double z = ds::sample_unit_noise(ds::NoiseFamily::Gaussian, rng);
    const double c = ds::sample_unit_noise(ds::NoiseFamily::Cauchy, rng);
    s_lap += l * l;
    s_log += g * g;
    s_gau += z * z;
    if (std::fabs(c) < 1.0) abs_cauchy_median_count += 1;
  }
  EXPECT_NEAR(s_lap / n, 2.0, 0.05);
  EXPECT_NEAR(s_log / n, M_PI * M_PI / 3.0, 0.06);
  EXPECT_NEAR(s_gau / n, 1.0, 0.02);
  EXPECT_NEAR(abs_cauchy_median_count / n, 0.5, 0.01);
}

TEST(Noise, FamilyNamesRoundTrip) {
  for (auto f : {ds::NoiseFamily::Laplace, ds::NoiseFamily::Logistic, ds::NoiseFamily::Cauchy,
                 ds::NoiseFamily::Gaussian, ds::NoiseFamily::None}) {
    EXPECT_EQ(ds::parse_noise_family(ds::to_string(f)), f);
  }
  EXPECT_FALSE(ds::parse_noise_family("student-t"));
  EXPECT_THROW(ds::NoiseSpec(ds::NoiseFamily::Laplace, -1.0), std::invalid_argument);
}

TEST(Uniform, StaysInRange) {
  ds::RngState rng(3);
  for (int i = 0; i < 10000; ++i) {
    const double u = ds::sample_uniform(-2.0, 2.0, rng);
    EXPECT_GE(u, -2.0);
    EXPECT_LT(u, 2.0);
  }
  EXPECT_EQ(ds::sample_uniform(1.0, 1.0, rng), 1.0);
  EXPECT_THROW(ds::sample_uniform(1.0, 0.0, rng), std::invalid_argument);
}
