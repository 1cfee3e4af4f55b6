#include "robust_loss/distributions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace robust_loss::distributions {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::string_view to_string(NoiseFamily family) noexcept {
  switch (family) {
    case NoiseFamily::Laplace: return "laplace";
    case NoiseFamily::Logistic: return "logistic";
    case NoiseFamily::Cauchy: return "cauchy";
    case NoiseFamily::Gaussian: return "gaussian";
    case NoiseFamily::None: return "none";
  }
  return "none";
}

std::optional<NoiseFamily> parse_noise_family(std::string_view name) noexcept {
  for (auto f : {NoiseFamily::Laplace, NoiseFamily::Logistic, NoiseFamily::Cauchy,
                 NoiseFamily::Gaussian, NoiseFamily::None}) {
    if (name == to_string(f)) return f;
  }
  return std::nullopt;
}

NoiseSpec::NoiseSpec(NoiseFamily family, double scale) : family_(family), scale_(scale) {
  if (!std::isfinite(scale) || scale < 0.0) {
    throw std::invalid_argument("NoiseSpec: scale must be finite and >= 0, got " +
                                std::to_string(scale));
  }
}

std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t RngState::next_u64() noexcept {
  ++counter_;
  return splitmix64_mix(key_ + counter_ * kGolden);
}

double RngState::next_open_unit() noexcept {
  for (;;) {
    const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    if (u > 0.0) return u;
  }
}

RngState RngState::split(std::uint64_t index) const noexcept {
  return RngState(splitmix64_mix(key_ ^ splitmix64_mix(index + kGolden)));
}

double sample_unit_noise(NoiseFamily family, RngState& rng) {
  switch (family) {
    case NoiseFamily::None:
      return 0.0;
    case NoiseFamily::Laplace: {
      const double v = rng.next_open_unit() - 0.5;
      const double mag = -std::log1p(-2.0 * std::fabs(v));
      return v < 0.0 ? -mag : mag;
    }
    case NoiseFamily::Logistic: {
      const double u = rng.next_open_unit();
      return std::log(u) - std::log1p(-u);
    }
    case NoiseFamily::Cauchy: {
      const double u = rng.next_open_unit();
      return std::tan(std::numbers::pi * (u - 0.5));
    }
    case NoiseFamily::Gaussian: {
      const double u1 = rng.next_open_unit();
      const double u2 = rng.next_open_unit();
      return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }
  }
  throw std::invalid_argument("unknown noise family");
}

double sample_noise(const NoiseSpec& spec, RngState& rng) {
  if (spec.family() == NoiseFamily::None || spec.scale() == 0.0) return 0.0;
  return spec.scale() * sample_unit_noise(spec.family(), rng);
}

double sample_uniform(double lo, double hi, RngState& rng) {
  if (!(lo <= hi)) throw std::invalid_argument("sample_uniform: lo must be <= hi");
  if (lo == hi) return lo;
  const double u = static_cast<double>(rng.next_u64() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

}  // namespace robust_loss::distributions
