#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "finsler/errors.hpp"
#include "finsler/monomial_table.hpp"
#include "finsler/scalar.hpp"

namespace finsler {

/// Truncated multivariate Taylor polynomial.
///
/// Stores the Taylor coefficients c_alpha = (d^alpha f)(p) / alpha! of a
/// function of `vars` variables for every multi-index with |alpha| <= order,
/// densely and in graded order. The coefficient type T is generic so jets nest
/// (Jet<Jet<double>>); T only has to support the hooks in scalar.hpp.
///
/// A jet with zero variables is a plain constant and combines with any other
/// jet. Binary operations on two non-constant jets must agree on `vars` and
/// truncate to the smaller order.
template <typename T>
class Jet {
 public:
  Jet() : vars_(0), order_(0), coeffs_(1, T(0.0)) {}
  explicit Jet(double c) : vars_(0), order_(0), coeffs_(1, T(c)) {}

  static Jet constant(int vars, int order, const T& value) {
    Jet j(vars, order);
    j.coeffs_[0] = value;
    return j;
  }

  /// Independent variable `var` at `value`: f = value + (x_var - p_var).
  static Jet variable(int vars, int order, int var, const T& value) {
    if (var < 0 || var >= vars) throw std::out_of_range("jet variable index out of range");
    Jet j(vars, order);
    j.coeffs_[0] = value;
    if (order >= 1) {
      MultiIndex e{};
      e[var] = 1;
      j.coeffs_[j.table().index_of(e)] = T(1.0);
    }
    return j;
  }

  int vars() const { return vars_; }
  int order() const { return order_; }
  bool is_constant() const { return vars_ == 0; }
  const T& value() const { return coeffs_[0]; }
  std::span<const T> coefficients() const { return coeffs_; }

  /// Taylor coefficient c_alpha (zero beyond the stored range is not implied:
  /// asking for |alpha| > order throws).
  T coefficient(const MultiIndex& alpha) const {
    int deg = 0;
    for (auto a : alpha) deg += a;
    if (deg > order_) {
      if (is_constant()) return T(0.0);
      throw OrderExceeded("derivative of order " + std::to_string(deg) +
                          " requested from a jet of order " + std::to_string(order_));
    }
    if (is_constant()) return deg == 0 ? coeffs_[0] : T(0.0);
    return coeffs_[table().index_of(alpha)];
  }

  /// Partial derivative d^alpha f at the expansion point.
  T derivative(const MultiIndex& alpha) const {
    if (is_constant()) return coefficient(alpha);
    const auto& tab = table();
    T c = coefficient(alpha);
    return c * tab.factorial(tab.index_of(alpha));
  }

  /// Jet of d f / d x_var, one order lower.
  Jet differentiate(int var) const {
    if (is_constant()) return Jet(0.0);
    if (order_ == 0) {
      throw OrderExceeded("cannot differentiate a jet of order 0");
    }
    Jet out(vars_, order_ - 1);
    for (std::size_t i = 0; const auto& s : table().shifts(var, order_)) {
      out.coeffs_[i++] = coeffs_[s.target] * s.factor;
    }
    return out;
  }

  Jet truncate(int order) const {
    if (is_constant() || order >= order_) return *this;
    Jet out(vars_, order);
    std::copy_n(coeffs_.begin(), out.coeffs_.size(), out.coeffs_.begin());
    return out;
  }

  Jet operator-() const {
    Jet out = *this;
    for (auto& c : out.coeffs_) c = -c;
    return out;
  }

  Jet& operator+=(const Jet& rhs) { return *this = *this + rhs; }
  Jet& operator-=(const Jet& rhs) { return *this = *this - rhs; }
  Jet& operator*=(const Jet& rhs) { return *this = *this * rhs; }

  friend Jet operator+(const Jet& a, const Jet& b) {
    if (b.is_constant()) return a.shift_constant(b.value(), +1);
    if (a.is_constant()) return b.shift_constant(a.value(), +1);
    Jet out = a.conformed(b);
    for (std::size_t i = 0; i < out.coeffs_.size(); ++i) out.coeffs_[i] = out.coeffs_[i] + b.coeffs_[i];
    return out;
  }

  friend Jet operator-(const Jet& a, const Jet& b) {
    if (b.is_constant()) return a.shift_constant(b.value(), -1);
    if (a.is_constant()) return (-b).shift_constant(a.value(), +1);
    Jet out = a.conformed(b);
    for (std::size_t i = 0; i < out.coeffs_.size(); ++i) out.coeffs_[i] = out.coeffs_[i] - b.coeffs_[i];
    return out;
  }

  friend Jet operator*(const Jet& a, const Jet& b) {
    if (a.is_constant()) return b.scaled(a.value());
    if (b.is_constant()) return a.scaled(b.value());
    check_compatible(a, b);
    const int order = std::min(a.order_, b.order_);
    Jet out(a.vars_, order);
    for (const auto& p : a.table().products(order)) {
      out.coeffs_[p.out] = out.coeffs_[p.out] + a.coeffs_[p.lhs] * b.coeffs_[p.rhs];
    }
    return out;
  }

  friend Jet operator/(const Jet& a, const Jet& b) {
    if (b.is_constant()) return a.divided(checked_divisor(b.value()));
    const Jet num = a.is_constant() ? Jet::constant(b.vars_, b.order_, a.value()) : a.conformed(b);
    return quotient(num, b);
  }

  friend Jet operator+(const Jet& a, double c) { return a.shift_constant(T(c), +1); }
  friend Jet operator+(double c, const Jet& a) { return a.shift_constant(T(c), +1); }
  friend Jet operator-(const Jet& a, double c) { return a.shift_constant(T(c), -1); }
  friend Jet operator-(double c, const Jet& a) { return (-a).shift_constant(T(c), +1); }
  friend Jet operator*(const Jet& a, double c) { return a.scaled(T(c)); }
  friend Jet operator*(double c, const Jet& a) { return a.scaled(T(c)); }
  friend Jet operator/(const Jet& a, double c) { return a.divided(checked_divisor(T(c))); }
  friend Jet operator/(double c, const Jet& a) { return Jet(c) / a; }

  /// f(u) = sum_k d[k] (u - u0)^k, with d[k] = f^(k)(u0) / k! for k <= order.
  Jet compose(std::span<const T> taylor) const {
    if (is_constant()) return Jet::from_value(taylor[0]);
    Jet du = *this;
    du.coeffs_[0] = T(0.0);
    Jet acc = Jet::constant(vars_, order_, taylor[order_]);
    for (int k = order_ - 1; k >= 0; --k) {
      acc = acc * du;
      acc.coeffs_[0] = acc.coeffs_[0] + taylor[k];
    }
    return acc;
  }

  friend Jet scalar_sqrt(const Jet& u) {
    const double v = plain_value(u.value());
    if (v < 0.0) throw DomainError("sqrt of negative value");
    if (v == 0.0 && has_derivatives(u)) throw DomainError("sqrt is not differentiable at 0");
    if (u.is_constant()) return Jet::from_value(scalar_sqrt(u.value()));
    const T root = scalar_sqrt(u.value());
    return u.compose(binomial_series(u.value(), root, 0.5, u.order_));
  }

  friend Jet scalar_pow_real(const Jet& u, double r) {
    const double v = plain_value(u.value());
    if (v < 0.0) throw DomainError("non-integer power of negative value");
    if (v == 0.0) {
      if (r < 0.0) throw DomainError("division by zero");
      if (has_derivatives(u)) throw DomainError("fractional power is not differentiable at 0");
    }
    if (u.is_constant()) return Jet::from_value(scalar_pow_real(u.value(), r));
    const T head = scalar_pow_real(u.value(), r);
    return u.compose(binomial_series(u.value(), head, r, u.order_));
  }

  friend Jet scalar_abs(const Jet& u) {
    const double v = plain_value(u.value());
    if (v > 0.0) return u;
    if (v < 0.0) return -u;
    if (has_derivatives(u)) throw DomainError("abs is not differentiable at 0");
    return u;
  }

  friend double plain_value(const Jet& u) { return plain_value(u.value()); }

  friend bool has_derivatives(const Jet& u) {
    return (!u.is_constant() && u.order_ > 0) || has_derivatives(u.value());
  }

 private:
  Jet(int vars, int order) : vars_(vars), order_(order) {
    if (order < 0 || order > kMaxJetOrder) {
      throw OrderExceeded("jet order " + std::to_string(order) + " outside [0, " +
                          std::to_string(kMaxJetOrder) + "]");
    }
    coeffs_.assign(MonomialTable::get(vars).count(order), T(0.0));
  }

  static Jet from_value(const T& v) {
    Jet j;
    j.coeffs_[0] = v;
    return j;
  }

  const MonomialTable& table() const { return MonomialTable::get(vars_); }

  static void check_compatible(const Jet& a, const Jet& b) {
    if (a.vars_ != b.vars_) throw std::invalid_argument("jets over different variable sets");
  }

  static const T& checked_divisor(const T& v) {
    if (plain_value(v) == 0.0) throw DomainError("division by zero");
    return v;
  }

  // d[k] = binom(r, k) * u0^(r - k), given head = u0^r.
  static std::vector<T> binomial_series(const T& u0, const T& head, double r, int order) {
    std::vector<T> d(order + 1, T(0.0));
    const T inv = T(1.0) / u0;
    T term = head;
    double binom = 1.0;
    for (int k = 0; k <= order; ++k) {
      d[k] = term * binom;
      binom *= (r - k) / (k + 1.0);
      term = term * inv;
    }
    return d;
  }

  Jet conformed(const Jet& other) const {
    check_compatible(*this, other);
    return truncate(std::min(order_, other.order_));
  }

  Jet shift_constant(const T& c, int sign) const {
    Jet out = *this;
    out.coeffs_[0] = sign > 0 ? out.coeffs_[0] + c : out.coeffs_[0] - c;
    return out;
  }

  // Solves b * q = a degree by degree; q_0 = a_0 / b_0 exactly as in plain arithmetic.
  static Jet quotient(const Jet& a, const Jet& b) {
    const T& b0 = checked_divisor(b.value());
    const int order = a.order_;
    const auto& tab = a.table();
    std::vector<T> acc(a.coeffs_.begin(), a.coeffs_.end());
    Jet q(a.vars_, order);
    for (int d = 0; d <= order; ++d) {
      for (const auto& p : tab.products_of_degree(d)) {
        if (p.rhs == 0) continue;
        acc[p.out] = acc[p.out] - q.coeffs_[p.lhs] * b.coeffs_[p.rhs];
      }
      const std::size_t begin = d == 0 ? 0 : tab.count(d - 1);
      for (std::size_t i = begin; i < tab.count(d); ++i) q.coeffs_[i] = acc[i] / b0;
    }
    return q;
  }

  Jet divided(const T& c) const {
    Jet out = *this;
    for (auto& x : out.coeffs_) x = x / c;
    return out;
  }

  Jet scaled(const T& c) const {
    Jet out = *this;
    for (auto& x : out.coeffs_) x = x * c;
    return out;
  }

  int vars_;
  int order_;
  std::vector<T> coeffs_;
};

using Jet1 = Jet<double>;

}  // namespace finsler
