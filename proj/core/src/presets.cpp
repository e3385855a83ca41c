#include "finsler/presets.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace finsler {

namespace {

std::string literal(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Preset find_preset(std::string_view name, double curvature) {
  if (name == "paper-counterexample") {
    return {"paper-counterexample", 3, "sqrt(x3*y1*sqrt(y2^2+y3^2))", TangentPoint({0, 0, 1}, {1, 2, 2})};
  }
  if (name == "locally-minkowski") {
    return {"locally-minkowski", 3, "(y1^4+y2^4+y3^4)^(1/4)", TangentPoint({0, 0, 1}, {1, 2, 2})};
  }
  if (name == "riemann-constant-curvature") {
    if (!std::isfinite(curvature)) throw std::invalid_argument("curvature must be finite");
    const double q = curvature / 4.0;
    const std::string sign = q < 0.0 ? "-" : "+";
    const std::string src =
        "sqrt((y1^2+y2^2+y3^2))/(1" + sign + literal(std::fabs(q)) + "*(x1^2+x2^2+x3^2))";
    return {"riemann-constant-curvature", 3, src, TangentPoint({0.1, 0.2, 0.3}, {1, 2, 2})};
  }
  throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
}

std::vector<std::string> preset_names() {
  return {"paper-counterexample", "locally-minkowski", "riemann-constant-curvature"};
}

}  // namespace finsler
