#include "finsler/expr.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <limits>

namespace finsler {

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  Tok kind;
  SourceSpan span;
  std::string_view text;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    const std::size_t start = pos_;
    if (pos_ >= src_.size()) return {Tok::End, {start, start}, {}};
    const char c = src_[pos_];
    auto single = [&](Tok k) {
      ++pos_;
      return Token{k, {start, pos_}, src_.substr(start, 1)};
    };
    switch (c) {
      case '+': return single(Tok::Plus);
      case '-': return single(Tok::Minus);
      case '*': return single(Tok::Star);
      case '/': return single(Tok::Slash);
      case '^': return single(Tok::Caret);
      case '(': return single(Tok::LParen);
      case ')': return single(Tok::RParen);
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number(start);
    if (std::isalpha(static_cast<unsigned char>(c))) {
      while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      return {Tok::Ident, {start, pos_}, src_.substr(start, pos_ - start)};
    }
    throw ParseError({start, start + 1}, "unexpected character '" + std::string(1, c) + "'");
  }

 private:
  Token number(std::size_t start) {
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) throw ParseError({start, pos_}, "malformed number");
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      const std::size_t save = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) pos_ = save;
    }
    return {Tok::Number, {start, pos_}, src_.substr(start, pos_ - start)};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  Parser(std::string_view src, int n) : lexer_(src), n_(n) { advance(); }

  Node parse_all() {
    Node root = expr();
    if (cur_.kind != Tok::End) fail("unexpected '" + std::string(cur_.text) + "'");
    return root;
  }

 private:
  void advance() { cur_ = lexer_.next(); }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(cur_.span, msg); }

  void expect(Tok kind, const char* what) {
    if (cur_.kind != kind) {
      fail(std::string("expected ") + what +
           (cur_.kind == Tok::End ? " at end of input" : ", found '" + std::string(cur_.text) + "'"));
    }
    advance();
  }

  static Node binary(NodeKind kind, Node lhs, Node rhs) {
    Node out;
    out.kind = kind;
    out.span = {lhs.span.start, rhs.span.end};
    out.children.push_back(std::move(lhs));
    out.children.push_back(std::move(rhs));
    return out;
  }

  Node expr() {
    Node lhs = term();
    while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
      const NodeKind kind = cur_.kind == Tok::Plus ? NodeKind::Add : NodeKind::Sub;
      advance();
      lhs = binary(kind, std::move(lhs), term());
    }
    return lhs;
  }

  Node term() {
    Node lhs = factor();
    while (cur_.kind == Tok::Star || cur_.kind == Tok::Slash) {
      const NodeKind kind = cur_.kind == Tok::Star ? NodeKind::Mul : NodeKind::Div;
      advance();
      lhs = binary(kind, std::move(lhs), factor());
    }
    return lhs;
  }

  Node factor() {
    Node base = atom();
    if (cur_.kind != Tok::Caret) return base;
    advance();
    Node out;
    out.kind = NodeKind::Pow;
    std::size_t end = 0;
    out.exponent = rational(end);
    out.span = {base.span.start, end};
    out.children.push_back(std::move(base));
    return out;
  }

  std::int64_t integer_literal() {
    if (cur_.kind != Tok::Number) fail("expected integer exponent");
    std::int64_t v = 0;
    const auto* first = cur_.text.data();
    const auto* last = first + cur_.text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) fail("exponent must be an integer, found '" + std::string(cur_.text) + "'");
    take(cur_);
    return v;
  }

  // rational := ['-'] integer ('/' positive integer)?  |  '(' same ')'
  Rational rational(std::size_t& end) {
    const bool parenthesized = cur_.kind == Tok::LParen;
    if (parenthesized) advance();
    bool negative = false;
    if (cur_.kind == Tok::Minus || cur_.kind == Tok::Plus) {
      negative = cur_.kind == Tok::Minus;
      advance();
    }
    std::int64_t num = integer_literal();
    std::int64_t den = 1;
    end = prev_end();
    if (cur_.kind == Tok::Slash) {
      advance();
      const SourceSpan den_span = cur_.span;
      den = integer_literal();
      if (den <= 0) throw ParseError(den_span, "exponent denominator must be positive");
      end = den_span.end;
    }
    if (parenthesized) {
      end = cur_.span.end;
      expect(Tok::RParen, "')'");
    }
    return Rational(negative ? -num : num, den);
  }

  std::size_t prev_end() const { return last_end_; }

  Node atom() {
    const Token tok = cur_;
    switch (tok.kind) {
      case Tok::Number: {
        Node out;
        out.kind = NodeKind::Constant;
        const std::string lit(tok.text);
        char* parse_end = nullptr;
        out.value = std::strtod(lit.c_str(), &parse_end);
        out.span = tok.span;
        take(tok);
        return out;
      }
      case Tok::Minus: {
        take(tok);
        Node child = atom();
        Node out;
        out.kind = NodeKind::Neg;
        out.span = {tok.span.start, child.span.end};
        out.children.push_back(std::move(child));
        return out;
      }
      case Tok::LParen: {
        take(tok);
        Node inner = expr();
        const std::size_t close = cur_.span.end;
        expect(Tok::RParen, "')'");
        last_end_ = close;
        inner.span = {tok.span.start, close};
        return inner;
      }
      case Tok::Ident:
        return identifier(tok);
      case Tok::End:
        fail("unexpected end of input");
      default:
        fail("unexpected '" + std::string(tok.text) + "'");
    }
  }

  Node identifier(const Token& tok) {
    if (tok.text == "sqrt" || tok.text == "abs") {
      take(tok);
      expect(Tok::LParen, "'(' after function name");
      Node arg = expr();
      const std::size_t close = cur_.span.end;
      expect(Tok::RParen, "')'");
      last_end_ = close;
      Node out;
      out.kind = tok.text == "sqrt" ? NodeKind::Sqrt : NodeKind::Abs;
      out.span = {tok.span.start, close};
      out.children.push_back(std::move(arg));
      return out;
    }
    const char head = tok.text.front();
    const std::string_view digits = tok.text.substr(1);
    const bool all_digits =
        !digits.empty() && digits.find_first_not_of("0123456789") == std::string_view::npos;
    if ((head != 'x' && head != 'y') || !all_digits) {
      fail("unknown identifier '" + std::string(tok.text) + "'");
    }
    long long index = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), index);
    if (ec != std::errc() || index < 1) fail("variable index must be a positive integer");
    if (index > n_) {
      fail("variable index " + std::to_string(index) + " exceeds dimension " + std::to_string(n_));
    }
    take(tok);
    Node out;
    out.kind = head == 'x' ? NodeKind::VarX : NodeKind::VarY;
    out.index = static_cast<int>(index);
    out.span = tok.span;
    return out;
  }

  void take(const Token& tok) {
    last_end_ = tok.span.end;
    advance();
  }

  Lexer lexer_;
  int n_;
  Token cur_{Tok::End, {}, {}};
  std::size_t last_end_ = 0;
};

std::string format_literal(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

bool structurally_equal(const Node& a, const Node& b) {
  if (a.kind != b.kind || a.children.size() != b.children.size()) return false;
  switch (a.kind) {
    case NodeKind::Constant:
      if (a.value != b.value) return false;
      break;
    case NodeKind::VarX:
    case NodeKind::VarY:
      if (a.index != b.index) return false;
      break;
    case NodeKind::Pow:
      if (!(a.exponent == b.exponent)) return false;
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!structurally_equal(a.children[i], b.children[i])) return false;
  }
  return true;
}

Expression parse(std::string_view text, int n) {
  if (n < 1) throw ParseError({0, 0}, "dimension must be positive");
  Parser parser(text, n);
  auto root = std::make_shared<const Node>(parser.parse_all());
  return Expression(std::move(root), std::string(text), n);
}

std::string to_string(const Node& node) {
  auto bin = [&](const char* op) {
    return "(" + to_string(node.children[0]) + op + to_string(node.children[1]) + ")";
  };
  switch (node.kind) {
    case NodeKind::Constant: return format_literal(node.value);
    case NodeKind::VarX: return "x" + std::to_string(node.index);
    case NodeKind::VarY: return "y" + std::to_string(node.index);
    case NodeKind::Add: return bin("+");
    case NodeKind::Sub: return bin("-");
    case NodeKind::Mul: return bin("*");
    case NodeKind::Div: return bin("/");
    case NodeKind::Neg: return "(-" + to_string(node.children[0]) + ")";
    case NodeKind::Sqrt: return "sqrt(" + to_string(node.children[0]) + ")";
    case NodeKind::Abs: return "abs(" + to_string(node.children[0]) + ")";
    case NodeKind::Pow: {
      const auto& r = node.exponent;
      std::string exp = r.is_integer() && r.num >= 0
                            ? std::to_string(r.num)
                            : "(" + std::to_string(r.num) + (r.is_integer() ? "" : "/" + std::to_string(r.den)) + ")";
      return "(" + to_string(node.children[0]) + "^" + exp + ")";
    }
  }
  return {};
}

namespace detail {

void throw_domain(const Expression&, const Node& node, const std::string& what) {
  throw DomainError(what, node.span);
}

}  // namespace detail

std::string DegenerateMetric::format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace finsler
