#include "robust_loss/verify.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <string>

namespace vf = robust_loss::verify;

TEST(Verify, DefaultProfilePasses) {
  const auto report = vf::run_all(*vf::profile_by_name("default"));
  for (const auto& c : report.checks) {
    EXPECT_TRUE(c.passed) << c.name << " " << c.max_violation << " > " << c.tolerance;
  }
  EXPECT_TRUE(report.passed());
  EXPECT_EQ(report.first_failure(), nullptr);
  ASSERT_EQ(report.limits.size(), 3u);
  for (const auto& l : report.limits) {
    const double tol = 1e-10 * std::fmax(1.0, l.alpha * l.alpha);
    EXPECT_LT(std::fabs(l.upper_gap), tol);
    EXPECT_LT(std::fabs(l.lower_gap), tol);
  }
}

TEST(Verify, FaultInjectionNamesSandwichFailure) {
  vf::FaultInjection faults;
  faults.lower_bound_scale = 1.01;
  const auto report = vf::run_all(*vf::profile_by_name("default"), 42, faults);
  ASSERT_FALSE(report.passed());
  EXPECT_EQ(report.first_failure()->name.rfind("losses.bound_sandwich.lower", 0), 0u);
}

TEST(Verify, Profiles) {
  const auto relaxed = vf::profile_by_name("relaxed");
  ASSERT_TRUE(relaxed);
  EXPECT_DOUBLE_EQ(relaxed->sandwich, 1e-11);
  EXPECT_FALSE(vf::profile_by_name("strict"));
}
