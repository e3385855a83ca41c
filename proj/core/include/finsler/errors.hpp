#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace finsler {

/// Byte range [start, end) into DSL source text.
struct SourceSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(SourceSpan span, const std::string& message)
      : std::runtime_error(message), span_(span) {}

  SourceSpan span() const { return span_; }

 private:
  SourceSpan span_;
};

/// Raised when a function is evaluated outside its domain (sqrt of a negative
/// value, division by zero, a non-differentiable point reached by a jet).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& message,
                       std::optional<SourceSpan> span = std::nullopt)
      : std::runtime_error(message), span_(span) {}

  const std::optional<SourceSpan>& span() const { return span_; }

 private:
  std::optional<SourceSpan> span_;
};

class DegenerateMetric : public std::runtime_error {
 public:
  DegenerateMetric(double det, double threshold)
      : std::runtime_error("det g = " + format_number(det) +
                           " below threshold " + format_number(threshold)),
        det_(det) {}

  double det() const { return det_; }

 private:
  static std::string format_number(double v);
  double det_;
};

/// The point is not in the slit tangent bundle or F is not positive there.
class InvalidPoint : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OrderExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotInNullity : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace finsler
