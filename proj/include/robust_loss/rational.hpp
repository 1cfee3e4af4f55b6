#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace robust_loss::interp {

__extension__ typedef __int128 WideInt;

/// Exact fraction with a positive denominator, always stored reduced.
/// Arithmetic throws std::overflow_error if a reduced result does not fit in
/// 64 bits.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t numerator, std::int64_t denominator = 1);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  double to_double() const noexcept {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  /// Parses "3", "-2/5", or " 1 / 9 ".
  static std::optional<Rational> parse(std::string_view text);

  /// "3", "-2/5".
  std::string to_string() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  static Rational from_wide(WideInt num, WideInt den);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace robust_loss::interp
