#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace finsler {

inline constexpr int kMaxJetOrder = 4;
inline constexpr int kMaxJetVars = 8;

using MultiIndex = std::array<std::uint8_t, kMaxJetVars>;

/// Graded enumeration of all multi-indices of total degree <= kMaxJetOrder
/// over a fixed number of variables. Monomials of degree <= K form a prefix of
/// the enumeration, so a jet of order K stores exactly the first count(K)
/// coefficients and lower-order truncation is a resize.
class MonomialTable {
 public:
  struct Product {
    std::uint32_t lhs;
    std::uint32_t rhs;
    std::uint32_t out;
  };

  struct Shift {
    std::uint32_t target;  // index of beta + e_v
    double factor;         // beta_v + 1
  };

  /// Shared immutable table for `vars` variables (0 <= vars <= kMaxJetVars).
  static const MonomialTable& get(int vars);

  int vars() const { return vars_; }

  /// Number of monomials of degree <= order.
  std::size_t count(int order) const { return count_upto_[order]; }

  const MultiIndex& exponents(std::size_t idx) const { return exponents_[idx]; }
  int degree(std::size_t idx) const { return degree_[idx]; }

  /// Index of multi-index `alpha`; alpha must have degree <= kMaxJetOrder.
  std::size_t index_of(const MultiIndex& alpha) const;

  /// alpha! = prod alpha_i!
  double factorial(std::size_t idx) const { return factorial_[idx]; }

  /// Products (a, b) -> c with deg(c) <= order.
  std::span<const Product> products(int order) const {
    return {products_.data(), product_count_upto_[order]};
  }

  /// Products whose output monomial has degree exactly `degree`.
  std::span<const Product> products_of_degree(int degree) const {
    const std::size_t begin = degree == 0 ? 0 : product_count_upto_[degree - 1];
    return {products_.data() + begin, product_count_upto_[degree] - begin};
  }

  /// For each monomial beta of degree <= order - 1, the index of beta + e_var.
  std::span<const Shift> shifts(int var, int order) const {
    return {shifts_[var].data(), count_upto_[order > 0 ? order - 1 : 0]};
  }

 private:
  explicit MonomialTable(int vars);
  std::size_t encode(const MultiIndex& alpha) const;

  int vars_;
  std::vector<MultiIndex> exponents_;
  std::vector<int> degree_;
  std::vector<double> factorial_;
  std::array<std::size_t, kMaxJetOrder + 1> count_upto_{};
  std::vector<std::int32_t> lookup_;
  std::vector<Product> products_;
  std::array<std::size_t, kMaxJetOrder + 1> product_count_upto_{};
  std::array<std::vector<Shift>, kMaxJetVars> shifts_;
};

}  // namespace finsler
