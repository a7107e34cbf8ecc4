#include "pta/oracle.hpp"
#include "test_support.hpp"

#include <doctest.h>

using namespace pta;
using namespace pta::test;

namespace {

ProbabilityInterval run(const ParsedFile& f, StateDomain dom, std::size_t steps = 64) {
  return exact_violation_probability(to_pcfa(f.program), f.program.sorts(), f.spec, dom, steps);
}

StateDomain domain(std::initializer_list<const char*> ranges) {
  StateDomain d;
  for (const char* r : ranges) d.ranges.insert(parse_range(r));
  return d;
}

// Maximum over the domain of the summed weight of traces violating from each state.
Rational by_summation(const ParsedFile& f, const StateDomain& dom) {
  Pcfa p = to_pcfa(f.program);
  auto ts = enumerate_traces(p, p.num_locations(), 1000000);
  Rational best = 0;
  std::vector<std::pair<std::string, std::pair<std::int64_t, std::int64_t>>> rs(dom.ranges.begin(), dom.ranges.end());
  State s;
  for (const auto& [name, sort] : f.program.sorts()) s[name] = 0;
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i < rs.size()) {
      for (auto v = rs[i].second.first; v <= rs[i].second.second; ++v) s[rs[i].first] = v, go(i + 1);
      return;
    }
    if (!f.spec.pre.evaluate(s)) return;
    Rational sum = 0;
    for (const auto& t : ts) {
      auto out = interpret_trace(t, s);
      if (out && !f.spec.post.evaluate(*out)) sum += weight(t);
    }
    best = std::max(best, sum);
  };
  go(0);
  return best;
}

}  // namespace

TEST_CASE("bounded coin game: seven sixteenths at C = 3") {
  ProbabilityInterval r = run(load("coin_game_bounded.prob"), domain({"C=0..3"}));
  CHECK(r.lower == Rational(7, 16));
  CHECK(r.upper == Rational(7, 16));
  ProbabilityInterval small = run(load("coin_game_bounded.prob"), domain({"C=0..1"}));
  CHECK(small.lower == Rational(1, 4));
}

TEST_CASE("single coin and empty precondition") {
  ParsedFile f = parse("@post X = 0\nint X;\n{ X := 0 } <+> { X := 1 }");
  ProbabilityInterval r = run(f, domain({"X=-3..3"}));
  CHECK(r.lower == Rational(1, 2));
  CHECK(r.upper == Rational(1, 2));
  ParsedFile none = parse("@pre false\n@post X = 0\nint X;\n{ X := 0 } <+> { X := 1 }");
  ProbabilityInterval z = run(none, domain({"X=-3..3"}));
  CHECK(z.lower == 0);
  CHECK(z.upper == 0);
}

TEST_CASE("nondeterminism is resolved against the property") {
  ParsedFile f = parse("@post X = 0\nint X;\n{ X := 0 } <*> { { X := 1 } <+> { X := 0 } }");
  ProbabilityInterval r = run(f, domain({"X=0..0"}));
  CHECK(r.lower == Rational(1, 2));
  CHECK(r.upper == Rational(1, 2));
}

TEST_CASE("truncation gap halves with every extra iteration") {
  ParsedFile f = parse("@post X = 5\nint X;\nX := 0;\nwhile X = 0 { { X := 1 } <+> { skip } }");
  StateDomain dom = domain({"X=0..0"});
  Rational prev_gap = 1, prev_lower = 0;
  std::vector<Rational> gaps;
  for (std::size_t steps = 4; steps <= 40; steps += 3) {
    ProbabilityInterval r = run(f, dom, steps);
    CHECK(r.lower <= r.upper);
    CHECK(r.lower >= prev_lower);
    CHECK(r.upper - r.lower <= prev_gap);
    prev_gap = r.upper - r.lower;
    prev_lower = r.lower;
    gaps.push_back(prev_gap);
  }
  for (std::size_t i = 1; i < gaps.size(); ++i) CHECK(gaps[i] * 2 == gaps[i - 1]);
  CHECK(gaps.back() > 0);
}

TEST_CASE("oracle agrees with weight summation on loop-free programs") {
  Rng rng(5);
  for (int i = 0; i < 40; ++i) {
    ProgramShape shape;
    shape.nondet = false;
    ParsedFile f = parse(random_program(rng, shape, "1/2"));
    StateDomain dom = domain({"X=-4..4", "Y=-4..4"});
    ProbabilityInterval r = run(f, dom);
    INFO(pretty_print(f));
    CHECK(r.lower == r.upper);
    CHECK(r.lower == by_summation(f, dom));
  }
}

TEST_CASE("ranges and domain limits") {
  auto r = parse_range("X=-4..4");
  CHECK(r.first == "X");
  CHECK(r.second == std::pair<std::int64_t, std::int64_t>{-4, 4});
  CHECK(parse_range("Count=0..0").second.second == 0);
  for (const char* bad : {"X", "X=1", "=1..2", "X=3..1", "X=a..2", "X=1..2z"})
    CHECK_THROWS_AS(parse_range(bad), std::invalid_argument);
  StateDomain big = domain({"C=0..100"});
  big.limit = 10;
  CHECK_THROWS_AS(run(load("coin_game_bounded.prob"), big), std::invalid_argument);
}
