#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

#include "fdid/error.hpp"

namespace fdid {

// Exact fraction on 128-bit integers, always reduced with a positive
// denominator. Only used for small recurrence systems, so overflow is
// treated as a hard error rather than handled.
class Rational {
 public:
  using Int = __int128;

  constexpr Rational() = default;
  constexpr Rational(long long n) : num_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(Int n, Int d) : num_(n), den_(d) {
    if (d == 0) throw NumericError("rational with zero denominator");
    normalize();
  }

  Int num() const { return num_; }
  Int den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  long double to_long_double() const { return static_cast<long double>(num_) / static_cast<long double>(den_); }
  bool is_zero() const { return num_ == 0; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    const Int g = gcd(a.den_, b.den_);
    return {checked_add(checked_mul(a.num_, b.den_ / g), checked_mul(b.num_, a.den_ / g)),
            checked_mul(a.den_ / g, b.den_)};
  }
  friend Rational operator-(const Rational& a) { return {-a.num_, a.den_}; }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    const Int g1 = gcd(a.num_, b.den_), g2 = gcd(b.num_, a.den_);
    return {checked_mul(a.num_ / g1, b.num_ / g2), checked_mul(a.den_ / g2, b.den_ / g1)};
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw NumericError("rational division by zero");
    return a * Rational(b.den_, b.num_);
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  friend bool operator==(const Rational& a, const Rational& b) { return a.num_ == b.num_ && a.den_ == b.den_; }

  std::string str() const {
    std::string s = to_string(num_);
    if (den_ != 1) s += "/" + to_string(den_);
    return s;
  }
  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  static Int abs(Int v) { return v < 0 ? -v : v; }
  static Int gcd(Int a, Int b) {
    a = abs(a);
    b = abs(b);
    while (b != 0) {
      const Int t = a % b;
      a = b;
      b = t;
    }
    return a == 0 ? 1 : a;
  }
  static Int checked_mul(Int a, Int b) {
    Int r;
    if (__builtin_mul_overflow(a, b, &r)) throw NumericError("rational overflow");
    return r;
  }
  static Int checked_add(Int a, Int b) {
    Int r;
    if (__builtin_add_overflow(a, b, &r)) throw NumericError("rational overflow");
    return r;
  }
  static std::string to_string(Int v) {
    if (v == 0) return "0";
    const bool neg = v < 0;
    std::string s;
    for (Int u = abs(v); u > 0; u /= 10) s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(u % 10)));
    return neg ? "-" + s : s;
  }
  void normalize() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const Int g = gcd(num_, den_);
    num_ /= g;
    den_ /= g;
  }

  Int num_ = 0;
  Int den_ = 1;
};

}  // namespace fdid
