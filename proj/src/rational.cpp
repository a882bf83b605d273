#include "platelab/rational.hpp"
#include "platelab/errors.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

namespace platelab {

const char* to_string(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::Config: return "config";
  case ErrorKind::Index: return "index";
  case ErrorKind::Representation: return "representation";
  case ErrorKind::Domain: return "domain";
  case ErrorKind::Certification: return "certification";
  case ErrorKind::Convergence: return "convergence";
  case ErrorKind::Resource: return "resource";
  }
  return "unknown";
}

namespace {

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

} // namespace

Rational Rational::from_wide(__int128 num, __int128 den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  __int128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  constexpr __int128 lo = std::numeric_limits<std::int64_t>::min() + 1;
  constexpr __int128 hi = std::numeric_limits<std::int64_t>::max();
  if (num < lo || num > hi || den > hi) throw DomainError("rational overflow");
  Rational r;
  r.num_ = static_cast<std::int64_t>(num);
  r.den_ = static_cast<std::int64_t>(den);
  return r;
}

Rational::Rational(std::int64_t num, std::int64_t den) { *this = from_wide(num, den); }

Rational Rational::operator-() const { return from_wide(-static_cast<__int128>(num_), den_); }

Rational Rational::reciprocal() const {
  if (num_ == 0) throw DomainError("reciprocal of zero");
  return from_wide(den_, num_);
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                             static_cast<__int128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw DomainError("division by zero rational");
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept {
  __int128 l = static_cast<__int128>(a.num_) * b.den_;
  __int128 r = static_cast<__int128>(b.num_) * a.den_;
  if (l < r) return std::strong_ordering::less;
  if (l > r) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Rational Rational::parse(const std::string& text) {
  auto bad = [&] { return DomainError("cannot parse rational '" + text + "'"); };
  if (text.empty()) throw bad();
  auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      std::size_t p1 = 0, p2 = 0;
      std::string a = text.substr(0, slash), b = text.substr(slash + 1);
      long long n = std::stoll(a, &p1);
      long long d = std::stoll(b, &p2);
      if (p1 != a.size() || p2 != b.size()) throw bad();
      return Rational(n, d);
    }
    auto dot = text.find('.');
    if (dot == std::string::npos) {
      std::size_t p = 0;
      long long n = std::stoll(text, &p);
      if (p != text.size()) throw bad();
      return Rational(n);
    }
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    std::size_t frac = text.size() - dot - 1;
    if (frac > 15 || digits.empty() || digits == "-" || digits == "+") throw bad();
    std::size_t p = 0;
    long long n = std::stoll(digits, &p);
    if (p != digits.size()) throw bad();
    long long d = 1;
    for (std::size_t i = 0; i < frac; ++i) d *= 10;
    return Rational(n, d);
  } catch (const std::logic_error&) {
    throw bad();
  }
}

Rational Rational::approximate(double x, std::int64_t max_den) {
  if (!std::isfinite(x)) throw DomainError("cannot approximate a non-finite value by a rational");
  // continued-fraction convergents
  __int128 p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double y = x;
  for (int it = 0; it < 64; ++it) {
    double a = std::floor(y);
    if (std::fabs(a) > 9.0e18) break;
    auto ai = static_cast<__int128>(a);
    __int128 p2 = ai * p1 + p0, q2 = ai * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    double rem = y - a;
    if (rem < 1e-15) break;
    y = 1.0 / rem;
  }
  if (q1 == 0) throw DomainError("rational approximation failed");
  return from_wide(p1, q1);
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

LebesgueExponent::LebesgueExponent(const Rational& r) {
  if (r < Rational(1)) throw DomainError("Lebesgue exponent must be >= 1, got " + r.str());
  inv_ = r.reciprocal();
}

LebesgueExponent LebesgueExponent::infinity() { return from_reciprocal(Rational(0)); }

LebesgueExponent LebesgueExponent::from_reciprocal(const Rational& inv) {
  if (inv < Rational(0) || inv > Rational(1))
    throw DomainError("reciprocal Lebesgue exponent must lie in [0,1], got " + inv.str());
  LebesgueExponent e;
  e.inv_ = inv;
  return e;
}

LebesgueExponent LebesgueExponent::parse(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "oo") return infinity();
  return LebesgueExponent(Rational::parse(text));
}

double LebesgueExponent::value() const noexcept {
  if (is_infinite()) return std::numeric_limits<double>::infinity();
  return static_cast<double>(inv_.den()) / static_cast<double>(inv_.num());
}

LebesgueExponent LebesgueExponent::dual() const { return from_reciprocal(Rational(1) - inv_); }

std::string LebesgueExponent::str() const {
  if (is_infinite()) return "inf";
  return inv_.reciprocal().str();
}

std::ostream& operator<<(std::ostream& os, const LebesgueExponent& r) { return os << r.str(); }

} // namespace platelab
