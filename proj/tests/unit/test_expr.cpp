#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <string>

#include "finsler/expr.hpp"
#include "finsler/jet.hpp"
#include "oracles.hpp"

using namespace finsler;

namespace {

double eval_plain(const Expression& e, const std::vector<double>& x, const std::vector<double>& y) {
  return evaluate(e, x, y);
}

/// Random grammar-valid source text over n dimensions.
std::string random_source(std::mt19937_64& rng, int n, int depth) {
  std::uniform_int_distribution<int> pick(0, 9);
  std::uniform_int_distribution<int> idx(1, n);
  std::uniform_int_distribution<int> small(1, 9);
  const int choice = depth <= 0 ? pick(rng) % 3 : pick(rng);
  switch (choice) {
    case 0: return (pick(rng) % 2 ? "x" : "y") + std::to_string(idx(rng));
    case 1: return std::to_string(small(rng));
    case 2: return std::to_string(small(rng)) + "." + std::to_string(small(rng)) + "e-1";
    case 3: return random_source(rng, n, depth - 1) + " + " + random_source(rng, n, depth - 1);
    case 4: return random_source(rng, n, depth - 1) + "-" + random_source(rng, n, depth - 1);
    case 5: return random_source(rng, n, depth - 1) + "*" + random_source(rng, n, depth - 1);
    case 6: return "(" + random_source(rng, n, depth - 1) + ")/(" + random_source(rng, n, depth - 1) + ")";
    case 7: return "sqrt(" + random_source(rng, n, depth - 1) + ")";
    case 8: return "-abs(" + random_source(rng, n, depth - 1) + ")";
    default: {
      const std::string base = "(" + random_source(rng, n, depth - 1) + ")";
      switch (pick(rng) % 3) {
        case 0: return base + "^" + std::to_string(small(rng));
        case 1: return base + "^" + std::to_string(small(rng)) + "/" + std::to_string(small(rng));
        default: return base + "^(-" + std::to_string(small(rng)) + "/" + std::to_string(small(rng)) + ")";
      }
    }
  }
}

}  // namespace

TEST_CASE("counterexample source parses to the expected tree") {
  const Expression e = parse(oracle::kCounterexample, 3);
  const Node& root = e.root();
  REQUIRE(root.kind == NodeKind::Sqrt);
  const Node& prod = root.children[0];
  REQUIRE(prod.kind == NodeKind::Mul);
  REQUIRE(prod.children[0].kind == NodeKind::Mul);
  CHECK(prod.children[0].children[0].kind == NodeKind::VarX);
  CHECK(prod.children[0].children[0].index == 3);
  CHECK(prod.children[0].children[1].kind == NodeKind::VarY);
  CHECK(prod.children[0].children[1].index == 1);
  const Node& inner = prod.children[1];
  REQUIRE(inner.kind == NodeKind::Sqrt);
  const Node& sum = inner.children[0];
  REQUIRE(sum.kind == NodeKind::Add);
  CHECK(sum.children[0].kind == NodeKind::Pow);
  CHECK(sum.children[0].exponent == Rational(2));
  CHECK(sum.children[0].children[0].kind == NodeKind::VarY);
  CHECK(sum.children[0].children[0].index == 2);
  CHECK(e.text(inner.span) == "sqrt(y2^2+y3^2)");
}

TEST_CASE("single variable") {
  const Expression e = parse("y1", 1);
  CHECK(e.root().kind == NodeKind::VarY);
  CHECK(e.root().index == 1);
  CHECK(e.root().children.empty());
}

TEST_CASE("variable index beyond the dimension is rejected") {
  try {
    parse("x4*y1", 3);
    FAIL("expected ParseError");
  } catch (const ParseError& err) {
    CHECK(std::string(err.what()).find("variable index 4 exceeds dimension 3") != std::string::npos);
    CHECK(err.span().start == 0);
    CHECK(err.span().end == 2);
  }
}

TEST_CASE("syntax errors carry positions") {
  const char* bad[] = {"", "y1+", "sqrt(y1", "y1 y2", "y1^x1", "y0", "(y1))", "2^1/0", "z1", "y1^1.5"};
  for (const char* text : bad) {
    CAPTURE(text);
    try {
      parse(text, 2);
      FAIL("expected ParseError");
    } catch (const ParseError& err) {
      CHECK(err.span().start <= err.span().end);
      CHECK(err.span().end <= std::string(text).size() + 1);
    }
  }
}

TEST_CASE("precedence and associativity") {
  const std::vector<double> x{2.0, 3.0}, y{5.0, 7.0};
  CHECK(eval_plain(parse("x1-x2-y1", 2), x, y) == doctest::Approx(2.0 - 3.0 - 5.0));
  CHECK(eval_plain(parse("y2/y1/x1", 2), x, y) == doctest::Approx(7.0 / 5.0 / 2.0));
  CHECK(eval_plain(parse("x1+x2*y1^2", 2), x, y) == doctest::Approx(2.0 + 3.0 * 25.0));
  // Unary minus is part of the atom, so the power applies to the negated value.
  CHECK(eval_plain(parse("-x1^2", 2), x, y) == doctest::Approx(4.0));
  CHECK(eval_plain(parse("-(x1^2)", 2), x, y) == doctest::Approx(-4.0));
  CHECK(eval_plain(parse("0-x1^2", 2), x, y) == doctest::Approx(-4.0));
  CHECK(eval_plain(parse("y1^1/2", 2), x, y) == doctest::Approx(std::sqrt(5.0)));
  CHECK(eval_plain(parse("y1^(-1/2)", 2), x, y) == doctest::Approx(1.0 / std::sqrt(5.0)));
  CHECK(eval_plain(parse("abs(x1-y1)", 2), x, y) == doctest::Approx(3.0));
  CHECK(eval_plain(parse("2.5e1*x1", 2), x, y) == doctest::Approx(50.0));
}

TEST_CASE("evaluation of the counterexample") {
  const Expression e = parse(oracle::kCounterexample, 3);
  CHECK(eval_plain(e, {0, 0, 1}, {1, 2, 2}) == doctest::Approx(1.681792831).epsilon(1e-9));
  CHECK(eval_plain(e, {0, 0, 1}, {1, 2, 2}) == std::sqrt(std::sqrt(8.0)));
  CHECK(eval_plain(e, {0, 0, 1}, {1, 0, 0}) == 0.0);
}

TEST_CASE("domain errors name the failing subexpression") {
  const Expression e = parse(oracle::kCounterexample, 3);
  try {
    eval_plain(e, {0, 0, -1}, {1, 1, 0});
    FAIL("expected DomainError");
  } catch (const DomainError& err) {
    REQUIRE(err.span().has_value());
    CHECK(e.text(*err.span()) == oracle::kCounterexample);
    CHECK(std::string(err.what()).find("sqrt of negative") != std::string::npos);
    CHECK(std::string(err.what()).find("x3*y1") != std::string::npos);
  }

  const Expression q = parse("x1 + y1/(x2-1)", 2);
  try {
    eval_plain(q, {0, 1}, {1, 1});
    FAIL("expected DomainError");
  } catch (const DomainError& err) {
    REQUIRE(err.span().has_value());
    CHECK(q.text(*err.span()) == "y1/(x2-1)");
    CHECK(std::string(err.what()).find("division by zero") != std::string::npos);
  }
}

TEST_CASE("abs is not differentiable at zero") {
  const Expression e = parse("abs(y1)", 1);
  const std::vector<Jet1> x{Jet1::variable(2, 1, 0, 0.0)};
  const std::vector<Jet1> y{Jet1::variable(2, 1, 1, 0.0)};
  CHECK_THROWS_AS(evaluate(e, x, y), DomainError);
  const std::vector<Jet1> y2{Jet1::variable(2, 1, 1, -2.0)};
  const Jet1 r = evaluate(e, x, y2);
  CHECK(r.value() == 2.0);
  CHECK(r.derivative({0, 1}) == -1.0);
}

TEST_CASE("printing reparses to a structurally equal tree") {
  std::mt19937_64 rng(20240611);
  for (int trial = 0; trial < 500; ++trial) {
    const std::string src = random_source(rng, 3, 4);
    CAPTURE(src);
    const Expression a = parse(src, 3);
    const std::string printed = to_string(a);
    const Expression b = parse(printed, 3);
    CHECK(structurally_equal(a.root(), b.root()));
    CHECK(to_string(b) == printed);
  }
}

TEST_CASE("structural equality distinguishes trees") {
  CHECK_FALSE(structurally_equal(parse("y1+y2", 2).root(), parse("y2+y1", 2).root()));
  CHECK_FALSE(structurally_equal(parse("y1^2", 2).root(), parse("y1^3", 2).root()));
  CHECK_FALSE(structurally_equal(parse("x1", 2).root(), parse("y1", 2).root()));
  CHECK(structurally_equal(parse("y1 + 2", 2).root(), parse("(y1)+(2)", 2).root()));
}

TEST_CASE("plain and order-0 jet evaluation agree exactly") {
  const Expression e = parse(oracle::kCounterexample, 3);
  const Expression quartic = parse("(y1^4+y2^4+y3^4)^(1/4)/(1+x1^2) - abs(x2)*y3/7", 3);
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto z = oracle::counterexample_point(rng);
    for (const Expression* f : {&e, &quartic}) {
      std::vector<Jet1> xs, ys;
      for (int i = 0; i < 3; ++i) {
        xs.push_back(Jet1::variable(6, 0, i, z.x[i]));
        ys.push_back(Jet1::variable(6, 0, 3 + i, z.y[i]));
      }
      const double plain = eval_plain(*f, z.x, z.y);
      const Jet1 jet = evaluate(*f, xs, ys);
      REQUIRE(jet.value() == plain);
    }
  }
}

TEST_CASE("counterexample is positively 1-homogeneous in y") {
  const Expression e = parse(oracle::kCounterexample, 3);
  std::mt19937_64 rng(11);
  const double lambdas[] = {0.5, 2.0, 3.0};
  for (int trial = 0; trial < 200; ++trial) {
    const auto z = oracle::counterexample_point(rng);
    const double lambda = lambdas[trial % 3];
    std::vector<double> ly = z.y;
    for (double& v : ly) v *= lambda;
    const double f = eval_plain(e, z.x, z.y);
    CHECK(std::fabs(eval_plain(e, z.x, ly) - lambda * f) <= 1e-12 * std::fabs(f));
  }
}
