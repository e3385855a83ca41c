#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "finsler/errors.hpp"
#include "finsler/scalar.hpp"

namespace finsler {

enum class NodeKind { Constant, VarX, VarY, Add, Sub, Mul, Div, Neg, Pow, Sqrt, Abs };

/// Immutable AST node. `value` is used by Constant, `index` (1-based) by the
/// variable kinds, `exponent` by Pow.
struct Node {
  NodeKind kind = NodeKind::Constant;
  double value = 0.0;
  int index = 0;
  Rational exponent;
  SourceSpan span;
  std::vector<Node> children;
};

/// Structural equality: kinds, literals, indices and exponents. Spans are ignored.
bool structurally_equal(const Node& a, const Node& b);

/// A parsed scalar function of (x^1..x^n, y^1..y^n). Cheap to copy, immutable.
class Expression {
 public:
  Expression(std::shared_ptr<const Node> root, std::string source, int dim)
      : root_(std::move(root)), source_(std::move(source)), dim_(dim) {}

  const Node& root() const { return *root_; }
  const std::string& source() const { return source_; }
  int dim() const { return dim_; }

  std::string_view text(SourceSpan span) const {
    return std::string_view(source_).substr(span.start, span.end - span.start);
  }

 private:
  std::shared_ptr<const Node> root_;
  std::string source_;
  int dim_;
};

/// Parses DSL text over n dimensions. Throws ParseError.
Expression parse(std::string_view text, int n);

/// Fully parenthesized rendering that reparses to a structurally equal AST.
std::string to_string(const Node& node);
inline std::string to_string(const Expression& e) { return to_string(e.root()); }

namespace detail {

[[noreturn]] void throw_domain(const Expression& e, const Node& node, const std::string& what);

template <typename T>
T eval_node(const Expression& e, const Node& node, std::span<const T> x, std::span<const T> y) {
  try {
    switch (node.kind) {
      case NodeKind::Constant:
        return T(node.value);
      case NodeKind::VarX:
        return x[node.index - 1];
      case NodeKind::VarY:
        return y[node.index - 1];
      case NodeKind::Add:
        return eval_node(e, node.children[0], x, y) + eval_node(e, node.children[1], x, y);
      case NodeKind::Sub:
        return eval_node(e, node.children[0], x, y) - eval_node(e, node.children[1], x, y);
      case NodeKind::Mul:
        return eval_node(e, node.children[0], x, y) * eval_node(e, node.children[1], x, y);
      case NodeKind::Div: {
        T num = eval_node(e, node.children[0], x, y);
        T den = eval_node(e, node.children[1], x, y);
        if (plain_value(den) == 0.0) {
          throw_domain(e, node, "division by zero (" + std::string(e.text(node.children[1].span)) + " = 0)");
        }
        return num / den;
      }
      case NodeKind::Neg:
        return -eval_node(e, node.children[0], x, y);
      case NodeKind::Sqrt: {
        T arg = eval_node(e, node.children[0], x, y);
        if (plain_value(arg) < 0.0) {
          throw_domain(e, node, "sqrt of negative (" + std::string(e.text(node.children[0].span)) + " < 0)");
        }
        return scalar_sqrt(arg);
      }
      case NodeKind::Abs:
        return scalar_abs(eval_node(e, node.children[0], x, y));
      case NodeKind::Pow: {
        T base = eval_node(e, node.children[0], x, y);
        const Rational r = node.exponent;
        if (r.num == 0) return T(1.0);
        if (r.is_integer()) {
          T p = ipow(base, static_cast<std::uint64_t>(r.num < 0 ? -r.num : r.num));
          if (r.num > 0) return p;
          if (plain_value(p) == 0.0) {
            throw_domain(e, node, "division by zero (" + std::string(e.text(node.children[0].span)) + " = 0)");
          }
          return T(1.0) / p;
        }
        if (plain_value(base) < 0.0) {
          throw_domain(e, node, "fractional power of negative (" +
                                    std::string(e.text(node.children[0].span)) + " < 0)");
        }
        return scalar_pow_real(base, r.to_double());
      }
    }
  } catch (const DomainError& err) {
    if (err.span()) throw;
    throw_domain(e, node, err.what());
  }
  throw std::logic_error("unknown node kind");
}

}  // namespace detail

/// Evaluates `e` at (x, y) over any scalar supporting the hooks of scalar.hpp
/// (double, Jet<double>, Jet<Jet<double>>, ...). Throws DomainError carrying
/// the span of the failing subexpression.
template <typename T>
T evaluate(const Expression& e, std::span<const T> x, std::span<const T> y) {
  if (static_cast<int>(x.size()) != e.dim() || static_cast<int>(y.size()) != e.dim()) {
    throw std::invalid_argument("evaluate: x and y must have length " + std::to_string(e.dim()));
  }
  return detail::eval_node(e, e.root(), x, y);
}

template <typename T>
T evaluate(const Expression& e, const std::vector<T>& x, const std::vector<T>& y) {
  return evaluate(e, std::span<const T>(x), std::span<const T>(y));
}

}  // namespace finsler
