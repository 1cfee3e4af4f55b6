#include "robust_loss/kernels.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

namespace kn = robust_loss::kernels;

namespace {

struct Data {
  std::vector<double> x, y, theta;
};

Data make_data(std::size_t n, std::size_t k) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Data d;
  for (std::size_t i = 0; i < n; ++i) {
    d.x.push_back(u(gen));
    d.y.push_back(10.0 * u(gen));
  }
  d.theta.assign(k, 0.1);
  return d;
}

void BM_HuberObjectiveSerial(benchmark::State& state) {
  const auto d = make_data(static_cast<std::size_t>(state.range(0)), 8);
  const kn::DesignMatrix design(d.x, 8);
  std::vector<double> grad(8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kn::huber_objective_serial(design, d.y, d.theta, 1.0, grad));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_HuberObjectiveParallel(benchmark::State& state) {
  const auto d = make_data(static_cast<std::size_t>(state.range(0)), 8);
  const kn::DesignMatrix design(d.x, 8);
  std::vector<double> grad(8);
  kn::GradientWorkspace ws;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kn::huber_objective_parallel(design, d.y, d.theta, 1.0, grad, ws));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

std::vector<double> grid(std::size_t n) {
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = -100.0 + 200.0 * static_cast<double>(i) / (n - 1);
  return xs;
}

void BM_SandwichSerial(benchmark::State& state) {
  const auto xs = grid(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kn::sandwich_violation_serial(xs, 1.0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SandwichParallel(benchmark::State& state) {
  const auto xs = grid(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kn::sandwich_violation_parallel(xs, 1.0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_HuberObjectiveSerial)->Arg(2000)->Arg(100000);
BENCHMARK(BM_HuberObjectiveParallel)->Arg(2000)->Arg(100000);
BENCHMARK(BM_SandwichSerial)->Arg(100001);
BENCHMARK(BM_SandwichParallel)->Arg(100001);

BENCHMARK_MAIN();
