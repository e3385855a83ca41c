#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

#include "finsler/errors.hpp"

namespace finsler {

/// Reduced fraction num/den with den > 0.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d = 1) : num(n), den(d) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  bool is_integer() const { return den == 1; }
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend bool operator==(const Rational&, const Rational&) = default;
};

// Plain-scalar hooks. Jet<T> provides matching overloads found by ADL; the
// DSL evaluator and the jet arithmetic are written against these names only.

inline double plain_value(double v) { return v; }
inline bool has_derivatives(double) { return false; }

inline double scalar_sqrt(double v) {
  if (v < 0.0) throw DomainError("sqrt of negative value");
  return std::sqrt(v);
}

inline double scalar_abs(double v) { return std::fabs(v); }

inline double scalar_pow_real(double v, double r) {
  if (v < 0.0) throw DomainError("non-integer power of negative value");
  if (v == 0.0 && r < 0.0) throw DomainError("division by zero");
  return std::pow(v, r);
}

/// x^k for k >= 1 by binary powering; shared by plain and jet evaluation so
/// that order-0 jets reproduce plain results bit for bit.
template <typename T>
T ipow(const T& x, std::uint64_t k) {
  T result = x;
  T base = x;
  bool first = true;
  while (k > 0) {
    if (k & 1U) {
      if (first) {
        result = base;
        first = false;
      } else {
        result = result * base;
      }
    }
    k >>= 1U;
    if (k > 0) base = base * base;
  }
  return result;
}

}  // namespace finsler
