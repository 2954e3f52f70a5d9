#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace pingpong {

// Exact rational arithmetic for quasigeodesic parameters and piece ratios.
// Values stay tiny (numerators bounded by window sizes), so int64 is plenty.
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Fraction() = default;
  Fraction(std::int64_t n) : num(n), den(1) {}
  Fraction(std::int64_t n, std::int64_t d) : num(n), den(d) {
    if (den == 0) throw std::invalid_argument("Fraction: zero denominator");
    normalize();
  }

  void normalize() {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    if (num == 0) den = 1;
  }

  bool is_integer() const { return den == 1; }
  std::int64_t floor() const {
    if (num >= 0) return num / den;
    return -(((-num) + den - 1) / den);
  }
  std::int64_t ceil() const { return -Fraction(-num, den).floor(); }

  std::string str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }

  friend Fraction operator+(const Fraction& a, const Fraction& b) {
    return Fraction(a.num * b.den + b.num * a.den, a.den * b.den);
  }
  friend Fraction operator-(const Fraction& a, const Fraction& b) {
    return Fraction(a.num * b.den - b.num * a.den, a.den * b.den);
  }
  friend Fraction operator*(const Fraction& a, const Fraction& b) {
    return Fraction(a.num * b.num, a.den * b.den);
  }
  friend Fraction operator/(const Fraction& a, const Fraction& b) {
    if (b.num == 0) throw std::domain_error("Fraction: division by zero");
    return Fraction(a.num * b.den, a.den * b.num);
  }
  friend bool operator==(const Fraction& a, const Fraction& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator!=(const Fraction& a, const Fraction& b) { return !(a == b); }
  friend bool operator<(const Fraction& a, const Fraction& b) {
    return a.num * b.den < b.num * a.den;
  }
  friend bool operator<=(const Fraction& a, const Fraction& b) {
    return a.num * b.den <= b.num * a.den;
  }
  friend bool operator>(const Fraction& a, const Fraction& b) { return b < a; }
  friend bool operator>=(const Fraction& a, const Fraction& b) { return b <= a; }
};

inline Fraction max(const Fraction& a, const Fraction& b) { return a < b ? b : a; }
inline Fraction min(const Fraction& a, const Fraction& b) { return a < b ? a : b; }

}  // namespace pingpong
