#include "robust_loss/rational.hpp"

#include <charconv>
#include <limits>
#include <stdexcept>

namespace robust_loss::interp {

namespace {

WideInt gcd_wide(WideInt a, WideInt b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const WideInt t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool fits(WideInt v) {
  return v >= std::numeric_limits<std::int64_t>::min() &&
         v <= std::numeric_limits<std::int64_t>::max();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

}  // namespace

Rational::Rational(std::int64_t numerator, std::int64_t denominator) {
  if (denominator == 0) throw std::invalid_argument("Rational: zero denominator");
  *this = from_wide(numerator, denominator);
}

Rational Rational::from_wide(WideInt num, WideInt den) {
  if (den == 0) throw std::domain_error("Rational: division by zero");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const WideInt g = gcd_wide(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (!fits(num) || !fits(den)) throw std::overflow_error("Rational: 64-bit overflow");
  Rational r;
  r.num_ = static_cast<std::int64_t>(num);
  r.den_ = static_cast<std::int64_t>(den);
  return r;
}

std::optional<Rational> Rational::parse(std::string_view text) {
  const auto slash = text.find('/');
  const auto num = parse_int(text.substr(0, slash));
  if (!num) return std::nullopt;
  if (slash == std::string_view::npos) return Rational(*num);
  const auto den = parse_int(text.substr(slash + 1));
  if (!den || *den == 0) return std::nullopt;
  return Rational(*num, *den);
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational::from_wide(static_cast<WideInt>(a.num_) * b.den_ +
                                 static_cast<WideInt>(b.num_) * a.den_,
                             static_cast<WideInt>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return Rational::from_wide(static_cast<WideInt>(a.num_) * b.den_ -
                                 static_cast<WideInt>(b.num_) * a.den_,
                             static_cast<WideInt>(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return Rational::from_wide(static_cast<WideInt>(a.num_) * b.num_,
                             static_cast<WideInt>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
  return Rational::from_wide(static_cast<WideInt>(a.num_) * b.den_,
                             static_cast<WideInt>(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const WideInt lhs = static_cast<WideInt>(a.num_) * b.den_;
  const WideInt rhs = static_cast<WideInt>(b.num_) * a.den_;
  return lhs <=> rhs;
}

}  // namespace robust_loss::interp
