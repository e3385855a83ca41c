#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace finsler {

enum class Variance { Upper, Lower };

/// Dense tensor components at a point, every axis of length n. Storage is
/// row-major in the order the indices are written: R^h_ijk is R(h, i, j, k).
/// Indices passed to operator() are 0-based.
class TensorBlock {
 public:
  TensorBlock() = default;
  TensorBlock(std::string name, std::vector<Variance> variance, int n)
      : name_(std::move(name)), variance_(std::move(variance)), n_(n) {
    std::size_t size = 1;
    for (std::size_t i = 0; i < variance_.size(); ++i) size *= static_cast<std::size_t>(n);
    data_.assign(size, 0.0);
  }

  const std::string& name() const { return name_; }
  const std::vector<Variance>& variance() const { return variance_; }
  int dim() const { return n_; }
  int rank() const { return static_cast<int>(variance_.size()); }
  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  template <typename... I>
  double& operator()(I... idx) {
    return data_[offset(std::array<int, sizeof...(I)>{static_cast<int>(idx)...})];
  }

  template <typename... I>
  double operator()(I... idx) const {
    return data_[offset(std::array<int, sizeof...(I)>{static_cast<int>(idx)...})];
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::fabs(v));
    return m;
  }

 private:
  template <std::size_t R>
  std::size_t offset(const std::array<int, R>& idx) const {
    if (R != variance_.size()) throw std::out_of_range(name_ + ": wrong number of indices");
    std::size_t off = 0;
    for (int i : idx) {
      if (i < 0 || i >= n_) throw std::out_of_range(name_ + ": index out of range");
      off = off * static_cast<std::size_t>(n_) + static_cast<std::size_t>(i);
    }
    return off;
  }

  std::string name_;
  std::vector<Variance> variance_;
  int n_ = 0;
  std::vector<double> data_;
};

/// Components of a pi-vector field in the fiber basis of the pullback bundle.
struct PiVector {
  std::vector<double> components;
};

}  // namespace finsler
