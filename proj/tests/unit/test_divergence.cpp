#include "robust_loss/divergence.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace dv = robust_loss::divergence;

namespace {

long double kl_direct(long double m1, long double b1, long double m2, long double b2) {
  const long double d = std::fabs(m1 - m2);
  return (b1 * std::exp(-d / b1) + d) / b2 + std::log(b2 / b1) - 1.0L;
}

}  // namespace

TEST(Laplace, RejectsBadScale) {
  EXPECT_THROW(dv::LaplaceDist(0.0, 0.0), std::invalid_argument);
  EXPECT_THROW(dv::LaplaceDist(NAN, 1.0), std::invalid_argument);
  EXPECT_THROW(dv::QuadratureSpec(40.0, 1000), std::invalid_argument);
  EXPECT_THROW(dv::QuadratureSpec(40.0, 100000), std::invalid_argument);
}

TEST(Laplace, PdfAndEntropy) {
  const dv::LaplaceDist d(1.0, 2.0);
  EXPECT_DOUBLE_EQ(dv::laplace_pdf(1.0, d), 0.25);
  EXPECT_DOUBLE_EQ(dv::laplace_pdf(3.0, d), 0.25 * std::exp(-1.0));
  EXPECT_DOUBLE_EQ(dv::laplace_entropy(d), 1.0 + std::log(4.0));
}

TEST(LaplaceKl, HandValues) {
  EXPECT_EQ(dv::laplace_kl({0.5, 2.0}, {0.5, 2.0}), 0.0);
  // Same location, b1 = 1, b2 = 2: 1/2 + log 2 - 1.
  EXPECT_NEAR(dv::laplace_kl({0.0, 1.0}, {0.0, 2.0}), std::numbers::ln2 - 0.5, 1e-16);
  // Equal scales b, distance d: e^{-d/b} + d/b - 1.
  EXPECT_NEAR(dv::laplace_kl({3.0, 1.0}, {0.0, 1.0}), std::exp(-3.0) + 2.0, 1e-15);
}

TEST(LaplaceKl, MatchesDirectLongDouble) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> mu(-5.0, 5.0), logb(-2.0, 2.0);
  for (int i = 0; i < 500; ++i) {
    const double m1 = mu(gen), m2 = mu(gen), b1 = std::exp(logb(gen)), b2 = std::exp(logb(gen));
    const double want = static_cast<double>(kl_direct(m1, b1, m2, b2));
    const double got = dv::laplace_kl({m1, b1}, {m2, b2});
    EXPECT_NEAR(got, want, 1e-13 * std::fmax(1.0, want));
  }
}

TEST(LaplaceKl, CrossEntropyMinusEntropy) {
  const dv::LaplaceDist p(0.3, 0.8), q(-1.1, 1.7);
  EXPECT_NEAR(dv::laplace_kl(p, q), dv::laplace_cross_entropy(p, q) - dv::laplace_entropy(p),
              1e-15);
}

TEST(KlNumeric, AgreesWithClosedFormBothOrders) {
  const dv::LaplaceDist a(1.0, 0.5), b(-0.5, 2.0);
  EXPECT_NEAR(dv::kl_numeric(a, b), dv::laplace_kl(a, b), 1e-9);
  EXPECT_NEAR(dv::kl_numeric(b, a), dv::laplace_kl(b, a), 1e-9);
}

TEST(KlNumeric, NarrowLabelWideWindow) {
  const dv::LaplaceDist p(0.0, 0.02), q(3.0, 5.0);
  const double want = dv::laplace_kl(p, q);
  EXPECT_NEAR(dv::kl_numeric(p, q), want, 1e-8 * std::fmax(1.0, want));
}
