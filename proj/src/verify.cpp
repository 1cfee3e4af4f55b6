#include "robust_loss/verify.hpp"

#include "robust_loss/distributions.hpp"
#include "robust_loss/divergence.hpp"
#include "robust_loss/kernels.hpp"
#include "robust_loss/losses.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace robust_loss::verify {

using divergence::LaplaceDist;
using losses::HuberParams;
using losses::KlLossParams;

std::optional<ToleranceProfile> profile_by_name(std::string_view name) {
  ToleranceProfile p;
  if (name == "default") return p;
  if (name == "relaxed") {
    p.name = "relaxed";
    for (double* t : {&p.sandwich, &p.tightness, &p.gradient_fd, &p.hessian_fd,
                      &p.hessian_at_zero_fd, &p.rescale, &p.kl_quadrature, &p.kl_identity,
                      &p.kl_nonneg, &p.loss_linkage}) {
      *t *= 10.0;
    }
    return p;
  }
  return std::nullopt;
}

bool Report::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const CheckResult* Report::first_failure() const {
  for (const auto& c : checks) {
    if (!c.passed) return &c;
  }
  return nullptr;
}

namespace {

constexpr std::array kSampleAlphas{0.1, 1.0, 10.0};

std::string alpha_tag(double alpha) {
  std::ostringstream os;
  os << "[alpha=" << alpha << "]";
  return os.str();
}

// Log-uniform draw on [lo, hi].
double log_uniform(double lo, double hi, distributions::RngState& rng) {
  return std::exp(distributions::sample_uniform(std::log(lo), std::log(hi), rng));
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return xs;
}

double rel_err(double got, double want) {
  const double denom = std::fabs(want);
  if (denom == 0.0) return std::fabs(got);
  return std::fabs(got - want) / denom;
}

class Suite {
 public:
  Suite(const ToleranceProfile& profile, std::uint64_t seed, const FaultInjection& faults)
      : tol_(profile), rng_(seed), faults_(faults) {}

  Report run() {
    non_negativity();
    even_symmetry();
    bound_sandwich();
    tightness_limits();
    gradient_checks();
    hessian_checks();
    second_order();
    piecewise();
    rescale_identity();
    huber_grad_continuity();
    kl_quadrature();
    kl_identities();
    return std::move(report_);
  }

 private:
  void add(std::string name, double stat, double tol, std::string detail = {},
           bool extra_ok = true) {
    report_.checks.push_back(
        {std::move(name), stat, tol, extra_ok && stat <= tol, std::move(detail)});
  }

  std::vector<KlLossParams> sampled_params(std::size_t n) {
    std::vector<KlLossParams> out;
    for (double a : kSampleAlphas) out.emplace_back(a, 1.0 / a);
    for (std::size_t i = 0; i < n; ++i) {
      out.emplace_back(log_uniform(0.05, 20.0, rng_), log_uniform(0.05, 20.0, rng_));
    }
    return out;
  }

  void non_negativity() {
    // Statistic: count of violations.
    double bad = 0.0;
    for (const auto& p : sampled_params(20)) {
      const HuberParams h(p.alpha());
      if (losses::kl_loss(0.0, p) != 0.0 || losses::huber(0.0, h) != 0.0) bad += 1.0;
      for (int i = 0; i < 200; ++i) {
        const double x = distributions::sample_uniform(-100.0, 100.0, rng_);
        if (x == 0.0) continue;
        if (!(losses::kl_loss(x, p) > 0.0) || !(losses::huber(x, h) > 0.0)) bad += 1.0;
      }
    }
    add("losses.non_negativity", bad, 0.0, "violations");
  }

  void even_symmetry() {
    double bad = 0.0;
    for (const auto& p : sampled_params(20)) {
      const HuberParams h(p.alpha());
      for (int i = 0; i < 200; ++i) {
        const double x = distributions::sample_uniform(-100.0, 100.0, rng_);
        if (losses::kl_loss(x, p) != losses::kl_loss(-x, p)) bad += 1.0;
        if (losses::huber(x, h) != losses::huber(-x, h)) bad += 1.0;
      }
    }
    add("losses.even_symmetry", bad, 0.0, "violations");
  }

  void bound_sandwich() {
    for (double a : kSampleAlphas) {
      const auto xs = linspace(-100.0 * a, 100.0 * a, tol_.sandwich_points);
      const auto v = kernels::sandwich_violation_parallel(xs, a, faults_.lower_bound_scale);
      add("losses.bound_sandwich.lower" + alpha_tag(a), v.lower, tol_.sandwich);
      add("losses.bound_sandwich.upper" + alpha_tag(a), v.upper, tol_.sandwich);
    }
  }

  void tightness_limits() {
    for (double a : kSampleAlphas) {
      const double x = 50.0 * a;
      const double h = losses::huber(x, HuberParams(a));
      const double upper_gap = losses::kl_loss(x, losses::upper_bound_params(a)) - h;
      const double lower_gap = h - losses::kl_loss(x, losses::lower_bound_params(a)) - 0.5 * a * a;
      report_.limits.push_back({a, upper_gap, lower_gap});
      const double tol = tol_.tightness * std::max(1.0, a * a);
      add("losses.tightness.upper" + alpha_tag(a), std::fabs(upper_gap), tol);
      add("losses.tightness.lower" + alpha_tag(a), std::fabs(lower_gap), tol);
    }
  }

  std::vector<KlLossParams> derivative_params() {
    std::vector<KlLossParams> out;
    for (double a : kSampleAlphas) {
      for (double b : {1.0 / a, 0.5, 3.0}) out.emplace_back(a, b);
    }
    return out;
  }

  void gradient_checks() {
    double worst = 0.0;
    double zero_bad = 0.0;
    double quotient_worst = 0.0;
    for (const auto& p : derivative_params()) {
      const double a = p.alpha();
      for (double x : linspace(-10.0 * a, 10.0 * a, 2001)) {
        const double h = 1e-6 * std::max(1.0, std::fabs(x));
        if (std::fabs(x) < 10.0 * h) continue;
        const double fd = (losses::kl_loss(x + h, p) - losses::kl_loss(x - h, p)) / (2.0 * h);
        worst = std::max(worst, rel_err(fd, losses::kl_loss_grad(x, p)));
      }
      if (losses::kl_loss_grad(0.0, p) != 0.0) zero_bad += 1.0;
      // One-sided difference quotients at 0 must shrink towards 0 with h.
      std::array<double, 2> previous{std::numeric_limits<double>::infinity(),
                                     std::numeric_limits<double>::infinity()};
      for (int k = 2; k <= 8; ++k) {
        const double h = a * std::pow(10.0, -k);
        for (std::size_t side = 0; side < 2; ++side) {
          const double step = side == 0 ? h : -h;
          const double q = (losses::kl_loss(step, p) - losses::kl_loss(0.0, p)) / step;
          if (!(std::fabs(q) < previous[side])) zero_bad += 1.0;
          previous[side] = std::fabs(q);
          if (k == 8) quotient_worst = std::max(quotient_worst, std::fabs(q) * p.beta());
        }
      }
    }
    add("losses.gradient_fd", worst, tol_.gradient_fd, "max relative error");
    add("losses.gradient_at_zero", quotient_worst, 1e-6,
        "beta * |one-sided quotient| at h = 1e-8 alpha", zero_bad == 0.0);
  }

  void hessian_checks() {
    double worst = 0.0;
    double at_zero = 0.0;
    bool exact_zero = true;
    for (const auto& p : derivative_params()) {
      const double a = p.alpha();
      for (double x : linspace(-10.0 * a, 10.0 * a, 2001)) {
        const double h = 1e-6 * std::max(1.0, std::fabs(x));
        if (std::fabs(x) < 10.0 * h) continue;
        const double fd =
            (losses::kl_loss_grad(x + h, p) - losses::kl_loss_grad(x - h, p)) / (2.0 * h);
        worst = std::max(worst, rel_err(fd, losses::kl_loss_hess(x, p)));
      }
      const double want = 1.0 / (a * p.beta());
      if (losses::kl_loss_hess(0.0, p) != want) exact_zero = false;
      const double h = 1e-6 * a;
      const double right = (losses::kl_loss_grad(h, p) - losses::kl_loss_grad(0.0, p)) / h;
      const double left = (losses::kl_loss_grad(0.0, p) - losses::kl_loss_grad(-h, p)) / h;
      at_zero = std::max({at_zero, rel_err(right, want), rel_err(left, want)});
    }
    add("losses.hessian_fd", worst, tol_.hessian_fd, "max relative error");
    add("losses.hessian_at_zero", at_zero, tol_.hessian_at_zero_fd,
        "one-sided quotients vs 1/(alpha beta)", exact_zero);
  }

  void second_order() {
    double worst = 0.0;
    for (const auto& p : sampled_params(10)) {
      const double a = p.alpha();
      for (int i = 1; i < 1000; ++i) {
        const double x = 0.1 * a * static_cast<double>(i) / 1000.0;
        for (double s : {x, -x}) {
          worst = std::max(worst, rel_err(losses::kl_loss(s, p),
                                          losses::kl_loss_quadratic_approx(s, p)));
        }
      }
    }
    add("losses.second_order_approx", worst, tol_.second_order, "max relative error");
  }

  void piecewise() {
    double gap_ratio = 0.0;
    double limit_ratio = 0.0;
    for (const auto& p : sampled_params(10)) {
      const double a = p.alpha();
      const double bound = a / p.beta();
      for (double x : linspace(-100.0 * a, 100.0 * a, 20001)) {
        const double gap =
            std::fabs(losses::kl_loss(x, p) - losses::kl_loss_piecewise_approx(x, p));
        gap_ratio = std::max(gap_ratio, gap / bound);
      }
      const double far = 50.0 * a;
      limit_ratio = std::max(
          limit_ratio,
          std::fabs(losses::kl_loss(far, p) - losses::kl_loss_piecewise_approx(far, p)) / bound);
    }
    add("losses.piecewise_gap", gap_ratio, 1.0, "max gap / (alpha/beta)");
    add("losses.piecewise_limit", limit_ratio, 1e-12, "gap / (alpha/beta) at |x| = 50 alpha");
  }

  void rescale_identity() {
    double worst = 0.0;
    for (int i = 0; i < 2000; ++i) {
      const KlLossParams p(log_uniform(0.05, 20.0, rng_), log_uniform(0.05, 20.0, rng_));
      const double gamma = log_uniform(0.1, 10.0, rng_);
      const double lambda = log_uniform(0.1, 10.0, rng_);
      const double x = distributions::sample_uniform(-100.0, 100.0, rng_);
      const double lhs = lambda * losses::kl_loss(gamma * x, p);
      const double rhs = losses::kl_loss(x, losses::rescale_params(p, gamma, lambda));
      worst = std::max(worst, rel_err(lhs, rhs));
    }
    add("losses.rescale_identity", worst, tol_.rescale, "max relative error");
  }

  void huber_grad_continuity() {
    double worst = 0.0;
    for (double a : {0.1, 1.0, 10.0, 0.37, 123.0}) {
      const HuberParams p(a);
      for (double s : {a, -a}) {
        const double at = losses::huber_grad(s, p);
        const double outside = losses::huber_grad(std::nextafter(s, 2.0 * s), p);
        const double inside = losses::huber_grad(std::nextafter(s, 0.0), p);
        worst = std::max({worst, std::fabs(at - outside), std::fabs(at - inside) / a});
      }
    }
    // Inside neighbour differs by one ulp of alpha; the outside one must match exactly.
    add("losses.huber_grad_continuity", worst, 4.0 * std::numeric_limits<double>::epsilon());
  }

  void kl_quadrature() {
    double worst = 0.0;
    int ge = 0;
    int lt = 0;
    for (std::size_t i = 0; i < tol_.quadrature_cases; ++i) {
      const LaplaceDist p(distributions::sample_uniform(-10.0, 10.0, rng_),
                          log_uniform(0.05, 20.0, rng_));
      const LaplaceDist q(distributions::sample_uniform(-10.0, 10.0, rng_),
                          log_uniform(0.05, 20.0, rng_));
      (p.mu() >= q.mu() ? ge : lt) += 1;
      const double closed = divergence::laplace_kl(p, q);
      const double numeric = divergence::kl_numeric(p, q);
      worst = std::max(worst, std::fabs(closed - numeric) / std::max(1.0, closed));
    }
    std::ostringstream detail;
    detail << "cases mu1>=mu2: " << ge << ", mu1<mu2: " << lt;
    add("divergence.kl_vs_quadrature", worst, tol_.kl_quadrature, detail.str(),
        tol_.quadrature_cases < 2 || (ge > 0 && lt > 0));
  }

  void kl_identities() {
    double identity = 0.0;
    double nonneg = 0.0;
    double linkage = 0.0;
    double symmetry_bad = 0.0;
    double separation_bad = 0.0;
    for (int i = 0; i < 500; ++i) {
      const double mu1 = distributions::sample_uniform(-10.0, 10.0, rng_);
      const double mu2 = distributions::sample_uniform(-10.0, 10.0, rng_);
      const double b1 = log_uniform(0.05, 20.0, rng_);
      const double b2 = log_uniform(0.05, 20.0, rng_);
      const LaplaceDist p(mu1, b1);
      const LaplaceDist q(mu2, b2);
      const double kl = divergence::laplace_kl(p, q);
      const double ce = divergence::laplace_cross_entropy(p, q);
      const double h = divergence::laplace_entropy(p);
      identity = std::max(identity,
                          std::fabs(kl - (ce - h)) / std::max({1.0, std::fabs(ce), std::fabs(h)}));
      nonneg = std::max(nonneg, -kl);
      if (!(kl > tol_.kl_nonneg)) separation_bad += 1.0;
      if (divergence::laplace_kl(p, p) != 0.0) separation_bad += 1.0;
      if (kl != divergence::laplace_kl(LaplaceDist(mu2, b1), LaplaceDist(mu1, b2))) {
        symmetry_bad += 1.0;
      }
      const double linked = divergence::laplace_kl(LaplaceDist(mu1, b1), LaplaceDist(mu2, b1));
      const double loss = losses::kl_loss(mu1 - mu2, KlLossParams(b1, b1));
      linkage = std::max(linkage, rel_err(loss, linked));
    }
    add("divergence.entropy_identity", identity, tol_.kl_identity,
        "|KL - (CE - H)| / max(1, |CE|, |H|)");
    add("divergence.non_negativity", nonneg, tol_.kl_nonneg, "max(-KL)", separation_bad == 0.0);
    add("divergence.loss_linkage", linkage, tol_.loss_linkage, "max relative error");
    add("divergence.case_symmetry", symmetry_bad, 0.0, "violations");
  }

  ToleranceProfile tol_;
  distributions::RngState rng_;
  FaultInjection faults_;
  Report report_;
};

}  // namespace

Report run_all(const ToleranceProfile& profile, std::uint64_t seed, const FaultInjection& faults) {
  return Suite(profile, seed, faults).run();
}

}  // namespace robust_loss::verify
