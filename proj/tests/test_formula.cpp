#include "test_support.hpp"

#include <doctest.h>

using namespace pta;
using namespace pta::test;

namespace {

const SortMap kSorts{{"X", Sort::Int}, {"Y", Sort::Int}, {"B", Sort::Bool}};

Formula f(const std::string& s) { return parse_formula(s, kSorts); }

// Random formula over X, Y, B with small coefficients.
Formula random_formula(Rng& rng, int depth) {
  if (depth == 0 || coin(rng, 0.3)) {
    if (coin(rng, 0.15)) return coin(rng) ? Formula::bool_var("B") : !Formula::bool_var("B");
    LinearTerm t = LinearTerm::variable("X", uniform(rng, -2, 2)) + LinearTerm::variable("Y", uniform(rng, -2, 2)) +
                   LinearTerm::constant(uniform(rng, -3, 3));
    CmpOp ops[] = {CmpOp::Lt, CmpOp::Le, CmpOp::Eq, CmpOp::Ne, CmpOp::Ge, CmpOp::Gt};
    return Formula::compare(t, ops[uniform(rng, 0, 5)], LinearTerm::constant(0));
  }
  Formula a = random_formula(rng, depth - 1), b = random_formula(rng, depth - 1);
  switch (uniform(rng, 0, 2)) {
    case 0: return a && b;
    case 1: return a || b;
    default: return !a;
  }
}

}  // namespace

TEST_CASE("rationals print exactly and parse decimals") {
  CHECK(to_string(Rational(3) / 8) == "3/8");
  CHECK(to_string(Rational(2)) == "2");
  CHECK(parse_rational("0.375") == Rational(3) / 8);
  CHECK(parse_rational("47/100") == Rational(47) / 100);
  CHECK(to_decimal(Rational(7) / 16, 4) == "0.4375");
  CHECK_THROWS(parse_rational("1/0"));
  CHECK_THROWS(parse_rational("abc"));
}

TEST_CASE("strict integer comparisons normalize to non-strict atoms") {
  CHECK(f("X > 0").to_string() == "X >= 1");
  CHECK(f("X < 0").to_string() == "X <= -1");
}

TEST_CASE("canonical form makes syntactic equality order independent") {
  CHECK(f("X > 0 && Y < 2") == f("Y < 2 && X > 0"));
  CHECK(f("X = 0 || X = 0") == f("X = 0"));
  CHECK(f("!(X > 0)") == f("X <= 0"));
  CHECK(f("2*X <= 4") == f("X <= 2"));
  CHECK((f("X = 1") && Formula::make_true()) == f("X = 1"));
  CHECK((f("X = 1") || Formula::make_false()) == f("X = 1"));
  CHECK((f("X = 1") && Formula::make_false()).is_false());
}

TEST_CASE("negation stays in negation normal form") {
  Formula g = !f("X > 0 && (B || Y = 2)");
  CHECK(g == f("X <= 0 || (!B && Y != 2)"));
  CHECK(!!g == g);
}

TEST_CASE("substitution and evaluation agree") {
  Rng rng(7);
  for (int i = 0; i < 300; ++i) {
    Formula g = random_formula(rng, 3);
    LinearTerm repl = LinearTerm::variable("Y") + LinearTerm::constant(uniform(rng, -2, 2));
    Formula h = g.substitute("X", repl);
    for (int x = -3; x <= 3; ++x)
      for (int y = -3; y <= 3; ++y)
        for (int b = 0; b <= 1; ++b) {
          State s{{"X", x}, {"Y", y}, {"B", b}};
          State t = s;
          t["X"] = repl.evaluate(s);
          REQUIRE(h.evaluate(s) == g.evaluate(t));
          REQUIRE((!g).evaluate(s) == !g.evaluate(s));
        }
  }
}

TEST_CASE("arithmetic overflow is reported, not wrapped") {
  CHECK_THROWS_AS(checked_add(INT64_MAX, 1), ArithmeticOverflow);
  CHECK_THROWS_AS(checked_mul(INT64_MAX, 2), ArithmeticOverflow);
  CHECK(checked_add(-5, 3) == -2);
}

TEST_CASE("collect_sorts and variables") {
  Formula g = f("X + Y > 0 && B");
  SortMap s;
  g.collect_sorts(s);
  CHECK(s.at("X") == Sort::Int);
  CHECK(s.at("B") == Sort::Bool);
  CHECK(g.variables() == std::set<std::string>{"B", "X", "Y"});
}
