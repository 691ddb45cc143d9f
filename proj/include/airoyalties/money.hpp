#pragma once

// Exact currency arithmetic. Amounts are integer cents, fractions are integer
// parts-per-billion, and products are carried in 128-bit integers until the
// single final rounding.

#include <charconv>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "airoyalties/error.hpp"

namespace airoyalties {

using wide_int = __int128;

/// Round-half-up division for non-negative numerators and positive denominators.
inline wide_int div_round(wide_int num, wide_int den) {
  if (den <= 0) throw Error(ErrorCode::InvariantViolation, "division by non-positive denominator");
  if (num < 0) return -div_round(-num, den);
  return (num + den / 2) / den;
}

class Cents {
 public:
  constexpr Cents() = default;
  constexpr explicit Cents(std::int64_t value) : value_(value) {}

  static constexpr Cents from_dollars(std::int64_t dollars) { return Cents(dollars * 100); }

  constexpr std::int64_t value() const { return value_; }
  /// Whole dollars, half-up.
  std::int64_t whole_dollars() const { return static_cast<std::int64_t>(div_round(value_, 100)); }
  double dollars() const { return static_cast<double>(value_) / 100.0; }

  constexpr Cents operator+(Cents o) const { return Cents(value_ + o.value_); }
  constexpr Cents operator-(Cents o) const { return Cents(value_ - o.value_); }
  constexpr Cents& operator+=(Cents o) {
    value_ += o.value_;
    return *this;
  }
  constexpr auto operator<=>(const Cents&) const = default;

 private:
  std::int64_t value_ = 0;
};

/// A value in [0, 1] held as parts per billion.
class Fraction {
 public:
  static constexpr std::int64_t kScale = 1'000'000'000;

  constexpr Fraction() = default;

  static Fraction from_ppb(std::int64_t ppb) {
    if (ppb < 0 || ppb > kScale) {
      throw Error(ErrorCode::InvalidParam, "fraction out of [0,1]: " + std::to_string(ppb) + " ppb");
    }
    Fraction f;
    f.ppb_ = ppb;
    return f;
  }

  /// Parses a plain decimal such as "0.55" or "1"; at most 9 fractional digits.
  static Fraction parse(std::string_view text) {
    auto fail = [&] { return Error(ErrorCode::InvalidParam, "not a fraction in [0,1]: '" + std::string(text) + "'"); };
    if (text.empty()) throw fail();
    const auto dot = text.find('.');
    const auto int_part = text.substr(0, dot);
    const auto frac_part = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    if (frac_part.size() > 9 || (int_part.empty() && frac_part.empty())) throw fail();
    for (char c : int_part) {
      if (c < '0' || c > '9') throw fail();  // "-0.1" would otherwise parse as 0
    }
    std::int64_t whole = 0;
    if (!int_part.empty()) {
      auto [p, ec] = std::from_chars(int_part.data(), int_part.data() + int_part.size(), whole);
      if (ec != std::errc() || p != int_part.data() + int_part.size() || whole < 0) throw fail();
    }
    std::int64_t frac = 0;
    for (char c : frac_part) {
      if (c < '0' || c > '9') throw fail();
      frac = frac * 10 + (c - '0');
    }
    for (auto i = frac_part.size(); i < 9; ++i) frac *= 10;
    if (whole > 1) throw fail();
    const std::int64_t ppb = whole * kScale + frac;
    if (ppb > kScale) throw fail();
    return from_ppb(ppb);
  }

  static Fraction one() { return from_ppb(kScale); }

  constexpr std::int64_t ppb() const { return ppb_; }
  double value() const { return static_cast<double>(ppb_) / static_cast<double>(kScale); }
  constexpr auto operator<=>(const Fraction&) const = default;

 private:
  std::int64_t ppb_ = 0;
};

/// Parses a non-negative integer (cents, counts). Underscores are accepted as digit separators.
inline std::int64_t parse_count(std::string_view text, std::string_view what) {
  std::string digits;
  for (char c : text) {
    if (c == '_') continue;
    digits.push_back(c);
  }
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
  if (digits.empty() || ec != std::errc() || p != digits.data() + digits.size() || v < 0) {
    throw Error(ErrorCode::InvalidParam, std::string(what) + ": not a non-negative integer: '" + std::string(text) + "'");
  }
  return v;
}

/// Formats whole dollars with thousands separators, e.g. 50495 -> "$50,495".
inline std::string format_dollars(Cents amount) {
  std::int64_t d = amount.whole_dollars();
  const bool negative = d < 0;
  std::string digits = std::to_string(negative ? -d : d);
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i > 0 && (digits.size() - i) % 3 == 0) out.push_back(',');
    out.push_back(digits[i]);
  }
  return (negative ? "-$" : "$") + out;
}

}  // namespace airoyalties
