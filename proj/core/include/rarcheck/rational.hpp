#ifndef RARCHECK_RATIONAL_HPP
#define RARCHECK_RATIONAL_HPP

#include <compare>
#include <cstdint>
#include <numeric>
#include <string>

namespace rarcheck {

/// Exact rational timestamp. Canonicalisation keeps denominators tiny, so
/// 64-bit components never get close to overflow in practice.
struct Rat {
  long long num = 0;
  long long den = 1;

  Rat() = default;
  Rat(long long n) : num(n), den(1) {}
  Rat(long long n, long long d) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    if (num == 0) den = 1;
  }

  friend Rat operator+(const Rat &a, const Rat &b) {
    return Rat(a.num * b.den + b.num * a.den, a.den * b.den);
  }
  friend Rat operator-(const Rat &a, const Rat &b) {
    return Rat(a.num * b.den - b.num * a.den, a.den * b.den);
  }

  /// Exact midpoint of two timestamps.
  static Rat mid(const Rat &a, const Rat &b) {
    return Rat(a.num * b.den + b.num * a.den, 2 * a.den * b.den);
  }

  friend bool operator==(const Rat &a, const Rat &b) {
    return a.num == b.num && a.den == b.den;
  }
  friend std::strong_ordering operator<=>(const Rat &a, const Rat &b) {
    long long l = a.num * b.den;
    long long r = b.num * a.den;
    return l <=> r;
  }

  std::string str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }
};

} // namespace rarcheck

#endif
