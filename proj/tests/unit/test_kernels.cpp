#include "robust_loss/kernels.hpp"

#include <gtest/gtest.h>
#include <omp.h>

#include <cmath>
#include <random>
#include <vector>

namespace kn = robust_loss::kernels;

namespace {

struct Problem {
  std::vector<double> x, y, theta;
};

Problem make_problem(std::size_t n, std::size_t k, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Problem p;
  for (std::size_t i = 0; i < n; ++i) {
    p.x.push_back(u(gen));
    p.y.push_back(5.0 * u(gen));
  }
  for (std::size_t j = 0; j < k; ++j) p.theta.push_back(u(gen));
  return p;
}

// Row-at-a-time textbook evaluation.
double naive(const Problem& p, double alpha, std::vector<double>& grad) {
  grad.assign(p.theta.size(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < p.x.size(); ++i) {
    double pred = 0.0;
    for (std::size_t j = 0; j < p.theta.size(); ++j) pred += p.theta[j] * std::pow(p.x[i], j);
    const double r = p.y[i] - pred;
    total += std::fabs(r) <= alpha ? 0.5 * r * r : alpha * (std::fabs(r) - 0.5 * alpha);
    const double psi = std::fmax(-alpha, std::fmin(alpha, r));
    for (std::size_t j = 0; j < p.theta.size(); ++j) grad[j] -= psi * std::pow(p.x[i], j);
  }
  return total;
}

}  // namespace

TEST(Design, VandermondeColumns) {
  const std::vector<double> x{2.0, -1.0, 0.5};
  const kn::DesignMatrix d(x, 4);
  EXPECT_EQ(d.rows(), 3u);
  EXPECT_EQ(d.cols(), 4u);
  EXPECT_EQ(d.column(0)[1], 1.0);
  EXPECT_EQ(d.column(3)[0], 8.0);
  EXPECT_EQ(d.column(3)[1], -1.0);
  EXPECT_EQ(d.column(2)[2], 0.25);
}

TEST(HuberObjective, SerialAndParallelMatchNaive) {
  const auto p = make_problem(1000, 6, 11);
  const kn::DesignMatrix d(p.x, p.theta.size());
  std::vector<double> g_naive, g_ser(6), g_par(6);
  kn::GradientWorkspace ws;
  for (double alpha : {0.5, 3.0, 100.0}) {
    const double f_naive = naive(p, alpha, g_naive);
    const double f_ser = kn::huber_objective_serial(d, p.y, p.theta, alpha, g_ser);
    const double f_par = kn::huber_objective_parallel(d, p.y, p.theta, alpha, g_par, ws);
    EXPECT_NEAR(f_ser, f_naive, 1e-10 * f_naive);
    EXPECT_NEAR(f_par, f_naive, 1e-10 * f_naive);
    for (std::size_t j = 0; j < 6; ++j) {
      const double scale = std::fmax(1.0, std::fabs(g_naive[j]));
      EXPECT_NEAR(g_ser[j], g_naive[j], 1e-10 * scale);
      EXPECT_NEAR(g_par[j], g_naive[j], 1e-10 * scale);
    }
  }
}

TEST(HuberObjective, ParallelIsBitIdenticalAcrossThreadCounts) {
  const auto p = make_problem(5000, 8, 12);
  const kn::DesignMatrix d(p.x, p.theta.size());
  kn::GradientWorkspace ws;
  std::vector<double> ref(8), g(8);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const double f_ref = kn::huber_objective_parallel(d, p.y, p.theta, 2.0, ref, ws);
  for (int t : {2, 3, 4, 7}) {
    omp_set_num_threads(t);
    EXPECT_EQ(kn::huber_objective_parallel(d, p.y, p.theta, 2.0, g, ws), f_ref) << t;
    EXPECT_EQ(g, ref) << t;
  }
  omp_set_num_threads(saved);
}

TEST(HuberObjective, HandlesPartialTrailingBlock) {
  const auto p = make_problem(kn::kBlockRows + 3, 3, 13);
  const kn::DesignMatrix d(p.x, 3);
  std::vector<double> g_naive, g(3);
  kn::GradientWorkspace ws;
  const double f = kn::huber_objective_parallel(d, p.y, p.theta, 1.0, g, ws);
  EXPECT_NEAR(f, naive(p, 1.0, g_naive), 1e-10 * f);
}

TEST(Sandwich, SerialAndParallelAgree) {
  std::vector<double> xs;
  for (int i = -5000; i <= 5000; ++i) xs.push_back(i * 0.01);
  for (double a : {0.1, 1.0, 10.0}) {
    const auto s = kn::sandwich_violation_serial(xs, a);
    const auto q = kn::sandwich_violation_parallel(xs, a);
    EXPECT_EQ(s.lower, q.lower);
    EXPECT_EQ(s.upper, q.upper);
    EXPECT_LT(s.lower, 1e-12);
    EXPECT_LT(s.upper, 1e-12);
  }
}

TEST(Sandwich, FaultHookProducesViolation) {
  std::vector<double> xs{-3.0, -1.0, 0.5, 2.0};
  const auto v = kn::sandwich_violation_parallel(xs, 1.0, 1.5);
  EXPECT_GT(v.lower, 0.1);
  EXPECT_EQ(v.lower, kn::sandwich_violation_serial(xs, 1.0, 1.5).lower);
}
