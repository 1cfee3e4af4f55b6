#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

// Seedable noise and covariate sampling.
//
// The generator is a counter-based SplitMix64: draw number n (n = 1, 2, ...)
// from a stream with key s is
//
//     z = s + n * 0x9E3779B97F4A7C15            (mod 2^64)
//     z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//     z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//     out = z ^ (z >> 31)
//
// A uniform on the open interval (0, 1) is (out >> 11) * 2^-53, redrawn while
// it equals 0. Child streams are keyed by mix(key ^ mix(index + golden)),
// where mix is the finalizer above applied to its argument and golden is
// 0x9E3779B97F4A7C15. Everything is integer arithmetic, so streams are
// identical across platforms.

namespace robust_loss::distributions {

enum class NoiseFamily { Laplace, Logistic, Cauchy, Gaussian, None };

std::string_view to_string(NoiseFamily family) noexcept;
std::optional<NoiseFamily> parse_noise_family(std::string_view name) noexcept;

/// Noise family with its canonical scale (Laplace b, Logistic s, Cauchy gamma,
/// Gaussian sigma). scale >= 0.
class NoiseSpec {
 public:
  NoiseSpec(NoiseFamily family, double scale);

  NoiseFamily family() const noexcept { return family_; }
  double scale() const noexcept { return scale_; }

 private:
  NoiseFamily family_;
  double scale_;
};

class RngState {
 public:
  explicit RngState(std::uint64_t seed) noexcept : key_(seed) {}

  std::uint64_t seed() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

  std::uint64_t next_u64() noexcept;

  /// Uniform on (0, 1); exact 0 is rejected.
  double next_open_unit() noexcept;

  /// Independent child stream for task `index`. Does not advance this state.
  RngState split(std::uint64_t index) const noexcept;

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64_mix(std::uint64_t z) noexcept;

/// One zero-location draw. Laplace and Logistic use the inverse CDF, Cauchy
/// uses scale * tan(pi (u - 1/2)), Gaussian uses Box-Muller (cosine branch,
/// two uniforms per draw). Family None and scale 0 both return exactly 0
/// without consuming the stream.
double sample_noise(const NoiseSpec& spec, RngState& rng);

/// Same transform at unit scale; sample_noise == scale * sample_unit_noise
/// for equal stream positions.
double sample_unit_noise(NoiseFamily family, RngState& rng);

/// Uniform on [lo, hi].
double sample_uniform(double lo, double hi, RngState& rng);

}  // namespace robust_loss::distributions
