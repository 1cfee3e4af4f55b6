#include "robust_loss/toyfit.hpp"

#include "robust_loss/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <tuple>

namespace robust_loss::toyfit {

using distributions::RngState;

PolyModel::PolyModel(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw std::invalid_argument("PolyModel: needs at least one coefficient");
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw std::invalid_argument("PolyModel: coefficients must be finite");
  }
}

PolyModel reference_polynomial() { return PolyModel({-10.0, 20.0, 15.0, -25.0, -3.0, 6.0}); }

double poly_eval(const PolyModel& m, double x) noexcept {
  const auto c = m.coeffs();
  double acc = c.back();
  for (std::size_t k = c.size() - 1; k-- > 0;) acc = acc * x + c[k];
  return acc;
}

void ToyConfig::validate() const {
  if (fit_degree_count < 1) throw std::invalid_argument("fit_degree_count: must be >= 1");
  if (n_samples < fit_degree_count) {
    throw std::invalid_argument("n_samples: must be >= fit_degree_count");
  }
  if (!std::isfinite(delta) || !(delta > 0.0)) {
    throw std::invalid_argument("delta: must be finite and > 0");
  }
}

void FitSettings::validate() const {
  if (!std::isfinite(learning_rate) || !(learning_rate > 0.0)) {
    throw std::invalid_argument("learning_rate: must be finite and > 0");
  }
  if (iterations < 1) throw std::invalid_argument("iterations: must be >= 1");
}

Dataset synthesize(const ToyConfig& cfg, RngState x_rng, std::optional<RngState> noise_rng) {
  cfg.validate();
  Dataset data;
  data.x.reserve(cfg.n_samples);
  data.y.reserve(cfg.n_samples);
  for (std::size_t i = 0; i < cfg.n_samples; ++i) {
    const double x = distributions::sample_uniform(-cfg.delta, cfg.delta, x_rng);
    double y = poly_eval(cfg.theta_star, x);
    if (noise_rng) y += distributions::sample_noise(cfg.noise, *noise_rng);
    data.x.push_back(x);
    data.y.push_back(y);
  }
  return data;
}

Dataset make_dataset(const ToyConfig& cfg, Split split) {
  const RngState master(cfg.seed);
  if (split == Split::Train) return synthesize(cfg, master.split(0), master.split(2));
  return synthesize(cfg, master.split(1), std::nullopt);
}

PolyModel fit(const Dataset& train, std::size_t n_coeffs, const FitSettings& settings,
              FitTrace* trace) {
  settings.validate();
  if (train.size() == 0) throw std::invalid_argument("fit: training set is empty");
  if (n_coeffs == 0) throw std::invalid_argument("fit: need at least one coefficient");

  const kernels::DesignMatrix design(train.x, n_coeffs);
  kernels::GradientWorkspace workspace;
  std::vector<double> theta(n_coeffs, 0.0);
  std::vector<double> grad(n_coeffs, 0.0);
  const double alpha = settings.loss.alpha();
  const double lr = settings.learning_rate;

  const double initial =
      kernels::huber_objective_parallel(design, train.y, theta, alpha, grad, workspace);
  double objective = initial;
  for (std::size_t it = 0; it < settings.iterations; ++it) {
    if (it > 0) {
      objective = kernels::huber_objective_parallel(design, train.y, theta, alpha, grad, workspace);
      if (!std::isfinite(objective) || (initial > 0.0 && objective > kBlowupFactor * initial)) {
        throw DivergenceError(it, "fit: objective blew up at iteration " + std::to_string(it));
      }
    }
    for (std::size_t k = 0; k < n_coeffs; ++k) {
      theta[k] -= lr * grad[k];
      if (!std::isfinite(theta[k])) {
        throw DivergenceError(it, "fit: non-finite coefficient at iteration " + std::to_string(it));
      }
    }
  }
  if (trace != nullptr) {
    trace->initial_objective = initial;
    trace->final_objective =
        kernels::huber_objective_parallel(design, train.y, theta, alpha, grad, workspace);
  }
  return PolyModel(std::move(theta));
}

double rmse(const PolyModel& m, const Dataset& test) {
  if (test.size() == 0) throw std::invalid_argument("rmse: test set is empty");
  double sum = 0.0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const double r = test.y[i] - poly_eval(m, test.x[i]);
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(test.size()));
}

namespace {

struct Problem {
  Dataset train;
  Dataset test;
};

struct CellTask {
  std::size_t problem = 0;
  double alpha = 0.0;
  double lr = 0.0;
};

void check_grid(std::span<const double> grid, const char* name) {
  if (grid.empty()) throw std::invalid_argument(std::string(name) + ": grid is empty");
  for (double v : grid) {
    if (!std::isfinite(v) || !(v > 0.0)) {
      throw std::invalid_argument(std::string(name) + ": grid values must be finite and > 0");
    }
  }
}

std::vector<std::pair<double, double>> grid_cells(std::span<const double> alpha_grid,
                                                  std::span<const double> lr_grid) {
  std::vector<std::pair<double, double>> cells;
  for (double a : alpha_grid) {
    for (double lr : lr_grid) cells.emplace_back(a, lr);
  }
  std::sort(cells.begin(), cells.end());
  return cells;
}

// Runs every task; tasks are independent and each writes only its own slot,
// so scheduling cannot change the results.
std::vector<GridCell> run_cells(const std::vector<Problem>& problems,
                                const std::vector<CellTask>& tasks, std::size_t n_coeffs,
                                std::size_t iterations) {
  std::vector<GridCell> out(tasks.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(tasks.size()); ++t) {
    const CellTask& task = tasks[static_cast<std::size_t>(t)];
    const Problem& problem = problems[task.problem];
    GridCell cell;
    cell.alpha = task.alpha;
    cell.learning_rate = task.lr;
    FitSettings settings{losses::HuberParams(task.alpha), task.lr, iterations, Init::Zeros};
    try {
      const PolyModel model = fit(problem.train, n_coeffs, settings);
      cell.rmse = rmse(model, problem.test);
      if (!std::isfinite(cell.rmse)) cell.rmse = std::numeric_limits<double>::infinity();
    } catch (const DivergenceError& e) {
      cell.diverged_at = e.iteration();
    }
    out[static_cast<std::size_t>(t)] = cell;
  }
  return out;
}

std::optional<GridSearchResult> summarize(std::vector<GridCell> table) {
  GridSearchResult result;
  bool found = false;
  for (const GridCell& cell : table) {
    if (!std::isfinite(cell.rmse)) continue;
    if (!found || cell.rmse < result.best_rmse) {
      result.best_alpha = cell.alpha;
      result.best_lr = cell.learning_rate;
      result.best_rmse = cell.rmse;
      found = true;
    }
  }
  if (!found) return std::nullopt;
  result.table = std::move(table);
  return result;
}

Problem make_problem(const ToyConfig& cfg) {
  return {make_dataset(cfg, Split::Train), make_dataset(cfg, Split::Test)};
}

}  // namespace

GridSearchResult grid_search(const ToyConfig& cfg, std::span<const double> alpha_grid,
                             std::span<const double> lr_grid, std::size_t iterations) {
  cfg.validate();
  check_grid(alpha_grid, "alpha_grid");
  check_grid(lr_grid, "lr_grid");
  if (iterations < 1) throw std::invalid_argument("iterations: must be >= 1");

  const std::vector<Problem> problems{make_problem(cfg)};
  std::vector<CellTask> tasks;
  for (auto [a, lr] : grid_cells(alpha_grid, lr_grid)) tasks.push_back({0, a, lr});
  auto result = summarize(run_cells(problems, tasks, cfg.fit_degree_count, iterations));
  if (!result) throw AllDivergedError("grid_search: every grid cell diverged");
  return *std::move(result);
}

std::vector<SweepPoint> noise_sweep(const ToyConfig& base, std::span<const double> noise_scales,
                                    std::span<const double> alpha_grid,
                                    std::span<const double> lr_grid, std::size_t iterations,
                                    std::size_t repeats) {
  base.validate();
  if (noise_scales.empty()) throw std::invalid_argument("noise_scales: must not be empty");
  if (repeats < 1) throw std::invalid_argument("repeats: must be >= 1");
  check_grid(alpha_grid, "alpha_grid");
  check_grid(lr_grid, "lr_grid");
  if (iterations < 1) throw std::invalid_argument("iterations: must be >= 1");

  const RngState master(base.seed);
  const auto cells = grid_cells(alpha_grid, lr_grid);

  std::vector<Problem> problems;
  std::vector<std::uint64_t> seeds;
  std::vector<CellTask> tasks;
  for (double scale : noise_scales) {
    for (std::size_t r = 0; r < repeats; ++r) {
      ToyConfig cfg = base;
      cfg.noise = distributions::NoiseSpec(base.noise.family(), scale);
      cfg.seed = master.split(r).seed();
      seeds.push_back(cfg.seed);
      problems.push_back(make_problem(cfg));
      for (auto [a, lr] : cells) tasks.push_back({problems.size() - 1, a, lr});
    }
  }

  const auto all = run_cells(problems, tasks, base.fit_degree_count, iterations);

  std::vector<SweepPoint> curve;
  std::size_t problem = 0;
  for (double scale : noise_scales) {
    SweepPoint point;
    point.noise_scale = scale;
    double sum = 0.0;
    std::size_t counted = 0;
    for (std::size_t r = 0; r < repeats; ++r, ++problem) {
      const auto first = all.begin() + static_cast<std::ptrdiff_t>(problem * cells.size());
      RepeatOutcome outcome;
      outcome.seed = seeds[problem];
      outcome.result =
          summarize(std::vector<GridCell>(first, first + static_cast<std::ptrdiff_t>(cells.size())));
      if (outcome.result) {
        sum += outcome.result->best_alpha;
        ++counted;
      }
      point.repeats.push_back(std::move(outcome));
    }
    point.mean_optimal_alpha =
        counted > 0 ? sum / static_cast<double>(counted) : std::numeric_limits<double>::quiet_NaN();
    curve.push_back(std::move(point));
  }
  return curve;
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw std::invalid_argument("spearman: need two equal-length samples of size >= 2");
  }
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  const double n = static_cast<double>(a.size());
  const double mean = (n + 1.0) / 2.0;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    cov += (ra[i] - mean) * (rb[i] - mean);
    va += (ra[i] - mean) * (ra[i] - mean);
    vb += (rb[i] - mean) * (rb[i] - mean);
  }
  if (va == 0.0 || vb == 0.0) return 0.0;
  return cov / std::sqrt(va * vb);
}

}  // namespace robust_loss::toyfit
