#include "pta/evidence.hpp"
#include "test_support.hpp"

#include <doctest.h>

using namespace pta;
using namespace pta::test;

namespace {

const SortMap& S() { return coin_sorts(); }

Formula f(const std::string& s) { return parse_formula(s, S()); }

Specification coin_spec(Rational beta) { return {Formula::make_true(), f("X = 0"), beta}; }

Pcfa program() { return to_pcfa(load("coin_game.prob").program); }

std::vector<std::string> log_text(const std::vector<ExamineEvent>& log) {
  std::vector<std::string> out;
  for (const auto& e : log) out.push_back(e.to_string());
  return out;
}

bool heavier_first(const Trace& a, const Trace& b) {
  if (weight(a) != weight(b)) return weight(a) > weight(b);
  if (a.size() != b.size()) return a.size() < b.size();
  return trace_less(a, b);
}

}  // namespace

TEST_CASE("traces of the pi reason CFMC come out by weight") {
  Pcfa m = reason_cfmc(pi_module());
  auto ts = enumerate_by_weight(m, 6);
  REQUIRE(ts.size() == 6);
  Rational sum = 0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    CHECK(weight(ts[k]) == Rational(1, 4) / Rational(1 << k));
    CHECK(accepts(m, ts[k]));
    sum += weight(ts[k]);
  }
  CHECK(sum == Rational(1, 2) - Rational(1, 128));
  CHECK(enumerate_by_weight(Pcfa::empty(), 5).empty());
  TraceEnumerator en(m);
  CHECK(*en.next() == ts[0]);
}

TEST_CASE("enumeration order on random CFMCs") {
  Rng rng(13);
  for (int i = 0; i < 120; ++i) {
    Pcfa a = normalize(random_cfmdp(rng));
    Pcfa m = random_sub_cfmc(rng, a);
    auto ts = enumerate_by_weight(m, 40);
    INFO(m.dump());
    std::set<Trace> seen;
    for (std::size_t k = 0; k < ts.size(); ++k) {
      CHECK(reference_accepts(m, ts[k]));
      CHECK(seen.insert(ts[k]).second);
      if (k) CHECK(heavier_first(ts[k - 1], ts[k]));
    }
    // Every accepted word heavier than the last one listed has been listed.
    if (ts.size() == 40) {
      for (const auto& w : reference_words(m, 10))
        if (heavier_first(w, ts.back())) CHECK(seen.count(w));
    } else {
      CHECK(seen == reference_words(m, 2 * m.num_locations() + 2));
    }
  }
}

TEST_CASE("compatibility") {
  Solver s = builtin_solver();
  CHECK(compatible(Formula::make_true(), f("C = 2"), s));
  CHECK_FALSE(compatible(f("C = 1"), f("C = 2"), s));
  CHECK(compatible(f("C >= 1"), f("C = 2 && X != 0"), s));
}

TEST_CASE("examining the pi-module") {
  Solver s = builtin_solver();
  SUBCASE("below the bound a counterexample of 3/8 appears") {
    SplitModule mod(pi_module());
    std::vector<ExamineEvent> log;
    ExamineResult r = examine(mod, coin_spec(Rational(3, 10)), Rational(3, 10), s, {}, &log);
    REQUIRE(r.outcome.kind == ExamineOutcome::Kind::CounterexampleFound);
    const Counterexample& cex = *r.outcome.counterexample;
    CHECK(cex.total_vp == Rational(3, 8));
    CHECK(s.equivalent(cex.error_pre, f("C = 2")));
    auto ts = two_iteration_traces();
    CHECK(std::set<Trace>(cex.traces.begin(), cex.traces.end()) == std::set<Trace>(ts.begin(), ts.end()));
    std::vector<std::string> why;
    CHECK(validate_counterexample(program(), coin_spec(Rational(3, 10)), Rational(3, 10), cex, s, &why));
    CHECK(why.empty());
    // The first round finds the mainstream C = 1 and certifies the rest.
    auto text = log_text(log);
    REQUIRE(text.size() >= 7);
    CHECK(text[0] == "bound 1/2");
    CHECK(text[1].rfind("mainstream", 0) == 0);
    CHECK(text[1].find("pre C = 1") != std::string::npos);
    CHECK(log[2].kind == ExamineEvent::Kind::Incompatible);
    CHECK(log[2].value == Rational(1, 8));
    CHECK(r.rounds >= 1);
  }
  SUBCASE("at one half it is verified") {
    SplitModule mod(pi_module());
    ExamineResult r = examine(mod, coin_spec(Rational(1, 2)), Rational(1, 2), s);
    CHECK(r.outcome.kind == ExamineOutcome::Kind::Verified);
    CHECK(r.outcome.upper_bound == Rational(1, 2));
    CHECK(r.rounds == 0);
  }
  SUBCASE("an empty module is verified at zero") {
    SplitModule mod;
    ExamineResult r = examine(mod, coin_spec(0), 0, s);
    CHECK(r.outcome.kind == ExamineOutcome::Kind::Verified);
    CHECK(r.outcome.upper_bound == 0);
  }
  SUBCASE("a trace budget of one is inconclusive") {
    SplitModule mod(pi_module());
    ExamineOptions opt;
    opt.trace_budget = 1;
    ExamineResult r = examine(mod, coin_spec(Rational(3, 10)), Rational(3, 10), s, opt);
    CHECK(r.outcome.kind == ExamineOutcome::Kind::Inconclusive);
    CHECK(r.outcome.reason.find("budget") != std::string::npos);
  }
}

TEST_CASE("one examination round") {
  Solver s = builtin_solver();
  Pcfa m = reason_cfmc(pi_module());
  std::vector<ExamineEvent> log;
  ExamineOutcome o = examine_round(m, Rational(1, 2), coin_spec(Rational(3, 10)), Rational(3, 10), s, 100, &log);
  REQUIRE(o.kind == ExamineOutcome::Kind::Certificate);
  CHECK(o.mainstream.traces.size() == 1);
  CHECK(o.mainstream.total_weight == Rational(1, 4));
  CHECK(s.equivalent(o.mainstream.total_pre, f("C = 1")));
  CHECK(o.incompatibles.size() == 3);
  CHECK(o.fakes.empty());
  CHECK(o.mass == Rational(7, 32));
  CHECK(log.back().to_string() == "certificate 7/32");

  // A program whose only trace is infeasible: everything is fake.
  Pcfa dead = *merge_traces({trace({"X := 0", "assume X > 0"}, S())});
  ExamineOutcome d = examine_round(dead, 1, coin_spec(0), 0, s, 100);
  CHECK(d.kind == ExamineOutcome::Kind::Certificate);
  CHECK(d.fakes.size() == 1);
  CHECK(d.mass == 1);
}

TEST_CASE("split conditions") {
  Solver s = builtin_solver();
  Specification spec = coin_spec(Rational(3, 10));
  Pcfa m = reason_cfmc(pi_module());
  auto ts = enumerate_by_weight(m, 2);  // C = 1 then C = 2
  SplitModule mod(m);
  CHECK_FALSE(mod.is_split());
  CHECK(bounded_language_equal(mod.assemble(), m, 20));
  SplitModule sp = add_split_condition(mod, f("C = 1"), spec, {ts[1]}, {ts[0]}, s);
  REQUIRE(sp.branches.size() == 2);
  CHECK(sp.is_split());
  CHECK(s.equivalent(sp.branches[0].guard, f("C = 1")));
  CHECK(s.equivalent(sp.branches[1].guard, f("C != 1")));
  CHECK(accepts(sp.branches[0].body, ts[0]));
  CHECK_FALSE(accepts(sp.branches[0].body, ts[1]));
  CHECK_FALSE(accepts(sp.branches[1].body, ts[0]));
  CHECK(accepts(sp.branches[1].body, ts[1]));
  Pcfa whole = sp.assemble();
  Trace guarded = ts[0];
  guarded.insert(guarded.begin(), Label::assume(sp.branches[0].guard));
  CHECK(accepts(whole, guarded));
  // A trace that violates from both halves stays in both.
  SplitModule kept = add_split_condition(mod, f("X = 5"), spec, {ts[0]}, {ts[0]}, s);
  for (const auto& b : kept.branches) CHECK(accepts(b.body, ts[0]));
  CHECK_THROWS_AS(add_split_condition(mod, Formula::make_false(), spec, {}, {}, s), std::invalid_argument);
  CHECK_THROWS_AS(add_split_condition(mod, f("C = C"), spec, {}, {}, s), std::invalid_argument);
}

TEST_CASE("counterexample validation") {
  Solver s = builtin_solver();
  Specification spec = coin_spec(Rational(3, 10));
  Pcfa p = program();
  auto ts = two_iteration_traces();
  Counterexample good{ts, f("C = 2"), Rational(3, 8)};
  CHECK(validate_counterexample(p, spec, spec.beta, good, s));
  std::vector<std::string> why;
  CHECK_FALSE(validate_counterexample(p, spec, Rational(1, 2), good, s, &why));
  CHECK(why.size() == 1);
  Counterexample weak = good;
  weak.error_pre = Formula::make_true();
  CHECK_FALSE(validate_counterexample(p, spec, spec.beta, weak, s));
  Counterexample total = good;
  total.total_vp = Rational(1, 2);
  CHECK_FALSE(validate_counterexample(p, spec, spec.beta, total, s));
  Counterexample dup = good;
  dup.traces.push_back(ts[0]);
  dup.total_vp = Rational(1, 2);
  CHECK_FALSE(validate_counterexample(p, spec, spec.beta, dup, s));
  Counterexample outside{{trace({"X := 0", "C := 0"}, S())}, f("C = 2"), 1};
  CHECK_FALSE(validate_counterexample(p, spec, 0, outside, s));
  Counterexample empty{{}, f("C = 2"), 0};
  CHECK_FALSE(validate_counterexample(p, spec, 0, empty, s));
}
