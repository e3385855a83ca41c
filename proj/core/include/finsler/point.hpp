#pragma once

#include <span>
#include <string>
#include <vector>

#include "finsler/errors.hpp"

namespace finsler {

/// A point z = (x, y) of the slit tangent bundle. `y` is the fundamental
/// pi-vector field evaluated at z.
struct TangentPoint {
  std::vector<double> x;
  std::vector<double> y;

  TangentPoint() = default;
  TangentPoint(std::vector<double> x_, std::vector<double> y_) : x(std::move(x_)), y(std::move(y_)) {
    if (x.size() != y.size()) throw std::invalid_argument("x and y must have equal length");
    if (x.empty()) throw std::invalid_argument("dimension must be positive");
    bool nonzero = false;
    for (double v : y) nonzero = nonzero || v != 0.0;
    if (!nonzero) throw InvalidPoint("y = 0 is not in the slit tangent bundle");
  }

  int dim() const { return static_cast<int>(x.size()); }

  friend bool operator==(const TangentPoint&, const TangentPoint&) = default;
};

}  // namespace finsler
