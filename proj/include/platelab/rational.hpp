#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace platelab {

/// Exact rational number on 64-bit integers. Every operation checks for
/// overflow through 128-bit intermediates and throws DomainError.
class Rational {
public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool is_zero() const noexcept { return num_ == 0; }
  bool is_integer() const noexcept { return den_ == 1; }

  Rational operator-() const;
  Rational reciprocal() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) noexcept {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept;

  /// Parses "p", "p/q" or a finite decimal such as "2.25".
  static Rational parse(const std::string& text);
  /// Best rational approximation with denominator at most max_den.
  static Rational approximate(double x, std::int64_t max_den = 1000000);

  std::string str() const;

private:
  static Rational from_wide(__int128 num, __int128 den);
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

/// Lebesgue exponent r in [1, inf], stored through its reciprocal so that
/// r = inf is the exact value 1/r = 0.
class LebesgueExponent {
public:
  LebesgueExponent() : inv_(1, 2) {}
  explicit LebesgueExponent(const Rational& r);
  static LebesgueExponent infinity();
  static LebesgueExponent from_reciprocal(const Rational& inv);
  /// Accepts "inf", "p", "p/q" or a decimal.
  static LebesgueExponent parse(const std::string& text);

  const Rational& reciprocal() const noexcept { return inv_; }
  bool is_infinite() const noexcept { return inv_.is_zero(); }
  double value() const noexcept;
  /// Conjugate exponent, 1/p + 1/p' = 1.
  LebesgueExponent dual() const;

  friend bool operator==(const LebesgueExponent& a, const LebesgueExponent& b) noexcept {
    return a.inv_ == b.inv_;
  }
  std::string str() const;

private:
  Rational inv_;
};

std::ostream& operator<<(std::ostream& os, const LebesgueExponent& r);

} // namespace platelab
