#include "test_support.hpp"

#include <doctest.h>

using namespace pta;
using namespace pta::test;

namespace {

const SortMap& S() { return coin_sorts(); }

Formula f(const std::string& s) { return parse_formula(s, S()); }

Trace random_trace(Rng& rng, std::size_t max_len) {
  static const char* pool[] = {"X := X + 1", "X := 0", "C := C - 1", "C := X", "assume C > 0", "assume !(C > 0)",
                               "assume X != 1", "skip", "Pb(0,L)", "Pb(1,R)", "Nd(2)", "X := C - X"};
  Trace t;
  int n = uniform(rng, 0, static_cast<int>(max_len));
  for (int i = 0; i < n; ++i) t.push_back(parse_label(pool[uniform(rng, 0, 11)], S()));
  return t;
}

}  // namespace

TEST_CASE("weights") {
  CHECK(weight(trace({"X := 0", "Pb(0,R)", "skip", "assume !(C > 0)"}, S())) == Rational(1, 2));
  CHECK(weight({}) == 1);
  Rational sum = 0;
  for (const auto& t : two_iteration_traces()) {
    CHECK(weight(t) == Rational(1, 8));
    sum += weight(t);
  }
  CHECK(sum == Rational(3, 8));
}

TEST_CASE("interpretation") {
  State s{{"X", 5}, {"C", 0}};
  auto r = interpret_trace(trace({"X := 0"}, S()), s);
  REQUIRE(r);
  CHECK(*r == State{{"X", 0}, {"C", 0}});
  CHECK_FALSE(interpret_trace(trace({"assume C > 0"}, S()), s).has_value());
  auto fin = interpret_trace(two_iteration_traces()[0], State{{"X", 7}, {"C", 2}});
  REQUIRE(fin);
  CHECK(fin->at("X") == 1);
  fin = interpret_trace(two_iteration_traces()[2], State{{"X", 7}, {"C", 2}});
  REQUIRE(fin);
  CHECK(fin->at("X") == 2);
  CHECK_FALSE(f("X = 0").evaluate(*fin));
}

TEST_CASE("transformers") {
  Solver s = builtin_solver();
  CHECK(pre_exists(parse_label("X := X + 1", S()), f("X = 0")) == f("X + 1 = 0"));
  CHECK(pre_exists(parse_label("assume C > 0", S()), Formula::make_true()) == f("C > 0"));
  Formula phi = f("X = 3 || C != 2");
  CHECK(pre_exists(Label::pb(1, Dir::R), phi) == phi);
  CHECK(wp_demonic(parse_label("assume C > 0", S()), Formula::make_false()) == f("!(C > 0)"));
  CHECK(s.equivalent(wp_demonic(parse_label("X := 0", S()), f("X = 0")), Formula::make_true()));
  Trace t = trace({"X := X + 1", "C := X", "skip", "Pb(0,L)", "X := C - X"}, S());
  CHECK(s.equivalent(wp_demonic(t, f("X >= C")), pre_exists(t, f("X >= C"))));
}

TEST_CASE("path conditions and classification") {
  Solver s = builtin_solver();
  Specification spec{Formula::make_true(), f("X = 0"), Rational(3, 10)};
  for (const auto& t : two_iteration_traces()) {
    CHECK(s.equivalent(path_condition(t, spec), f("C = 2")));
    TraceClass c = classify(t, spec, s);
    CHECK(c.violating);
    CHECK(s.equivalent(c.error_pre, f("C = 2")));
  }
  Trace one = trace({"X := 0", "Pb(0,R)", "skip", "assume C > 0", "Pb(1,R)", "X := X + 1", "C := C - 1",
                     "assume !(C > 0)"},
                    S());
  CHECK(s.equivalent(path_condition(one, spec), f("C = 1")));
  Specification any{Formula::make_true(), Formula::make_true(), 0};
  CHECK(s.equivalent(path_condition(trace({"X := 0", "assume X > 0"}, S()), any), Formula::make_false()));
  CHECK_FALSE(classify(trace({"X := 0", "Pb(0,L)", "C := 0", "assume !(C > 0)"}, S()), spec, s).violating);
  Specification none{Formula::make_false(), f("X = 0"), 0};
  for (const auto& t : two_iteration_traces()) CHECK_FALSE(classify(t, none, s).violating);
}

TEST_CASE("Hoare triples") {
  Solver s = builtin_solver();
  CHECK(hoare_valid(Formula::make_true(), parse_label("X := 0", S()), f("X = 0"), s));
  CHECK_FALSE(hoare_valid(f("X = 0"), parse_label("X := X + 1", S()), f("X = 0"), s));
  CHECK(hoare_valid(f("C <= 0"), parse_label("assume C > 0", S()), Formula::make_false(), s));
}

TEST_CASE("path conditions characterize feasible violating executions") {
  Rng rng(3);
  Solver s = builtin_solver();
  Specification spec{f("C >= -3"), f("X != 2"), 0};
  for (int i = 0; i < 120; ++i) {
    Trace t = random_trace(rng, 12);
    Formula pc = path_condition(t, spec);
    for (int x = -8; x <= 8; ++x)
      for (int c = -8; c <= 8; ++c) {
        State st{{"X", x}, {"C", c}};
        auto out = interpret_trace(t, st);
        bool expected = spec.pre.evaluate(st) && out && !spec.post.evaluate(*out);
        INFO(to_string(t) << " from X=" << x << " C=" << c);
        REQUIRE(pc.evaluate(st) == expected);
      }
  }
}

TEST_CASE("weight is multiplicative over concatenation") {
  Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    Trace a = random_trace(rng, 8), b = random_trace(rng, 8);
    Trace ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    CHECK(weight(ab) == weight(a) * weight(b));
  }
}

TEST_CASE("Hoare validity agrees with execution on small domains") {
  Rng rng(6);
  Solver s = builtin_solver();
  const char* props[] = {"X = 0", "C <= 0", "X >= C", "true", "false", "X != 1 && C > 0"};
  for (int i = 0; i < 200; ++i) {
    Trace one = random_trace(rng, 1);
    if (one.empty()) continue;
    Formula p = f(props[uniform(rng, 0, 5)]), q = f(props[uniform(rng, 0, 5)]);
    bool semantic = true;
    for (int x = -6; x <= 6 && semantic; ++x)
      for (int c = -6; c <= 6 && semantic; ++c) {
        State st{{"X", x}, {"C", c}};
        if (!p.evaluate(st)) continue;
        auto out = interpret(one[0], st);
        if (out && !q.evaluate(*out)) semantic = false;
      }
    INFO(p.to_string() << " " << one[0].to_string() << " " << q.to_string());
    CHECK(hoare_valid(p, one[0], q, s) == semantic);
  }
}
