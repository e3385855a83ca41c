#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "finsler/point.hpp"

namespace finsler {

struct Preset {
  std::string name;
  int dim = 0;
  std::string source;  // DSL text of F
  TangentPoint default_point;
};

/// Built-in functions:
///   paper-counterexample        F = sqrt(x3*y1*sqrt(y2^2+y3^2)), n = 3
///   locally-minkowski           F = (y1^4+y2^4+y3^4)^(1/4), n = 3
///   riemann-constant-curvature  F = |y| / (1 + c/4 |x|^2), n = 3, sectional curvature c
/// Throws std::invalid_argument for an unknown name.
Preset find_preset(std::string_view name, double curvature = 1.0);

std::vector<std::string> preset_names();

}  // namespace finsler
