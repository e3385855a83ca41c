#include "finsler/monomial_table.hpp"

#include <algorithm>
#include <stdexcept>

namespace finsler {

namespace {

void enumerate_degree(int vars, int degree, int pos, MultiIndex& current,
                      std::vector<MultiIndex>& out) {
  if (pos == vars - 1) {
    current[pos] = static_cast<std::uint8_t>(degree);
    out.push_back(current);
    current[pos] = 0;
    return;
  }
  for (int d = degree; d >= 0; --d) {
    current[pos] = static_cast<std::uint8_t>(d);
    enumerate_degree(vars, degree - d, pos + 1, current, out);
  }
  current[pos] = 0;
}

int degree_of(const MultiIndex& a) {
  int s = 0;
  for (auto v : a) s += v;
  return s;
}

}  // namespace

const MonomialTable& MonomialTable::get(int vars) {
  if (vars < 0 || vars > kMaxJetVars) {
    throw std::out_of_range("jet variable count out of range: " + std::to_string(vars));
  }
  static const std::array<MonomialTable, kMaxJetVars + 1> tables = [] {
    return std::array<MonomialTable, kMaxJetVars + 1>{
        MonomialTable(0), MonomialTable(1), MonomialTable(2),
        MonomialTable(3), MonomialTable(4), MonomialTable(5),
        MonomialTable(6), MonomialTable(7), MonomialTable(8)};
  }();
  return tables[vars];
}

MonomialTable::MonomialTable(int vars) : vars_(vars) {
  for (int d = 0; d <= kMaxJetOrder; ++d) {
    if (vars == 0) {
      if (d == 0) exponents_.push_back(MultiIndex{});
    } else {
      MultiIndex current{};
      enumerate_degree(vars, d, 0, current, exponents_);
    }
    count_upto_[d] = exponents_.size();
  }

  std::size_t lookup_size = 1;
  for (int i = 0; i < vars; ++i) lookup_size *= (kMaxJetOrder + 1);
  lookup_.assign(lookup_size, -1);

  degree_.reserve(exponents_.size());
  factorial_.reserve(exponents_.size());
  for (std::size_t i = 0; i < exponents_.size(); ++i) {
    const auto& a = exponents_[i];
    degree_.push_back(degree_of(a));
    double f = 1.0;
    for (auto v : a) {
      for (int k = 2; k <= v; ++k) f *= k;
    }
    factorial_.push_back(f);
    lookup_[encode(a)] = static_cast<std::int32_t>(i);
  }

  const std::size_t total = exponents_.size();
  for (std::size_t a = 0; a < total; ++a) {
    for (std::size_t b = 0; b < total; ++b) {
      if (degree_[a] + degree_[b] > kMaxJetOrder) continue;
      MultiIndex c{};
      for (int v = 0; v < vars; ++v) c[v] = exponents_[a][v] + exponents_[b][v];
      products_.push_back({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b),
                           static_cast<std::uint32_t>(index_of(c))});
    }
  }
  std::stable_sort(products_.begin(), products_.end(), [this](const Product& p, const Product& q) {
    return degree_[p.out] < degree_[q.out];
  });
  for (int d = 0; d <= kMaxJetOrder; ++d) {
    product_count_upto_[d] = static_cast<std::size_t>(
        std::count_if(products_.begin(), products_.end(),
                      [&](const Product& p) { return degree_[p.out] <= d; }));
  }

  for (int v = 0; v < vars; ++v) {
    auto& shifts = shifts_[v];
    for (std::size_t i = 0; i < count_upto_[kMaxJetOrder - 1]; ++i) {
      MultiIndex b = exponents_[i];
      const double factor = b[v] + 1.0;
      b[v] += 1;
      shifts.push_back({static_cast<std::uint32_t>(index_of(b)), factor});
    }
  }
}

std::size_t MonomialTable::encode(const MultiIndex& alpha) const {
  std::size_t key = 0;
  for (int i = 0; i < vars_; ++i) key = key * (kMaxJetOrder + 1) + alpha[i];
  return key;
}

std::size_t MonomialTable::index_of(const MultiIndex& alpha) const {
  for (int i = vars_; i < kMaxJetVars; ++i) {
    if (alpha[i] != 0) throw std::out_of_range("multi-index uses a variable beyond the table");
  }
  if (degree_of(alpha) > kMaxJetOrder) throw std::out_of_range("multi-index degree exceeds table");
  const auto idx = lookup_[encode(alpha)];
  return static_cast<std::size_t>(idx);
}

}  // namespace finsler
