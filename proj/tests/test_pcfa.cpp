#include "test_support.hpp"

#include <doctest.h>

using namespace pta;
using namespace pta::test;

namespace {

std::set<Trace> both(const std::set<Trace>& a, const std::set<Trace>& b) {
  std::set<Trace> out;
  for (const auto& t : a)
    if (b.count(t)) out.insert(t);
  return out;
}

std::set<Trace> minus(const std::set<Trace>& a, const std::set<Trace>& b) {
  std::set<Trace> out;
  for (const auto& t : a)
    if (!b.count(t)) out.insert(t);
  return out;
}

std::set<Trace> either(std::set<Trace> a, const std::set<Trace>& b) {
  a.insert(b.begin(), b.end());
  return a;
}

// Every location lies on a path from the initial to an accepting location.
bool is_trimmed(const Pcfa& a) {
  std::size_t n = a.num_locations();
  std::vector<bool> fwd(n), bwd(n);
  std::vector<Location> stack{a.initial()};
  fwd[a.initial()] = true;
  while (!stack.empty()) {
    Location l = stack.back();
    stack.pop_back();
    for (const auto& e : a.out(l))
      if (!fwd[e.target]) fwd[e.target] = true, stack.push_back(e.target);
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (Location l = 0; l < n; ++l) {
      if (bwd[l]) continue;
      bool b = a.is_accepting(l);
      for (const auto& e : a.out(l)) b = b || bwd[e.target];
      if (b) bwd[l] = true, changed = true;
    }
  }
  for (Location l = 0; l < n; ++l)
    if (!fwd[l] || !bwd[l]) return is_empty(a) && n <= 2;
  return true;
}

}  // namespace

TEST_CASE("language operations agree with the reference on random automata") {
  Rng rng(101);
  std::vector<Label> sigma = small_alphabet();
  for (int i = 0; i < 220; ++i) {
    std::size_t size = i % 3 == 0 ? 5 : 4;
    Pcfa a = random_nfa(rng, size, sigma), b = random_nfa(rng, size, sigma);
    std::size_t depth = 2 * std::max<std::size_t>(a.num_locations(), b.num_locations());
    auto wa = reference_words(a, depth), wb = reference_words(b, depth);
    INFO("round " << i << "\n" << a.dump() << "\n" << b.dump());
    CHECK(reference_words(determinize(a), depth) == wa);
    CHECK(reference_words(minimize(a), depth) == wa);
    CHECK(reference_words(trim(a), depth) == wa);
    Pcfa in = intersect(a, b), df = difference(a, b), un = unite(a, b);
    CHECK(reference_words(in, depth) == both(wa, wb));
    CHECK(reference_words(df, depth) == minus(wa, wb));
    CHECK(reference_words(un, depth) == either(wa, wb));
    CHECK(reference_words(unite(b, a), depth) == reference_words(un, depth));
    CHECK(is_trimmed(in));
    CHECK(is_trimmed(df));
    CHECK(is_empty(difference(a, a)));
    CHECK(is_empty(a) == wa.empty());
    CHECK(minimize(a).num_locations() <= std::max<std::size_t>(determinize(a).num_locations(), 2));
    if (!wa.empty()) {
      auto t = shortest_accepted_trace(a);
      REQUIRE(t);
      std::size_t shortest = SIZE_MAX;
      for (const auto& w : wa) shortest = std::min(shortest, w.size());
      CHECK(t->size() == shortest);
      CHECK(reference_accepts(a, *t));
    } else {
      CHECK_FALSE(shortest_accepted_trace(a).has_value());
    }
    CHECK(enumerate_traces(a, depth).size() == wa.size());
  }
}

TEST_CASE("identities on the coin game automaton") {
  Pcfa p = to_pcfa(load("coin_game.prob").program);
  CHECK(bounded_language_equal(intersect(p, p), p, 24));
  CHECK(is_empty(intersect(p, Pcfa::empty())));
  CHECK(bounded_language_equal(difference(p, Pcfa::empty()), p, 24));
  CHECK(bounded_language_equal(unite(p, Pcfa::empty()), p, 24));
  CHECK(is_empty(difference(p, p)));
  Pcfa m = minimize(p);
  CHECK(m.num_locations() <= 11);
  CHECK(bounded_language_equal(m, p, 24));
}

TEST_CASE("shortest trace and its tie-break") {
  const SortMap& s = coin_sorts();
  Pcfa p = to_pcfa(load("coin_game.prob").program);
  auto t = shortest_accepted_trace(p);
  REQUIRE(t);
  CHECK(*t == trace({"X := 0", "Pb(0,L)", "C := 0", "assume !(C > 0)"}, s));
  CHECK_FALSE(shortest_accepted_trace(Pcfa::empty()).has_value());
  Pcfa one(2);
  one.set_accepting(1);
  one.add_transition(0, Label::skip(), 1);
  CHECK(*shortest_accepted_trace(one) == Trace{Label::skip()});
}

TEST_CASE("label order ranks kinds, then ids, then L before R") {
  SortMap s{{"X", Sort::Int}};
  std::vector<Label> ls = {Label::nd(0), Label::pb(1, Dir::L), Label::pb(0, Dir::R), Label::pb(0, Dir::L),
                           Label::skip(), parse_label("assume X >= 0", s), parse_label("X := 0", s)};
  std::sort(ls.begin(), ls.end());
  std::vector<std::string> text;
  for (const auto& l : ls) text.push_back(l.to_string());
  CHECK(text == std::vector<std::string>{"X := 0", "assume X >= 0", "skip", "Pb(0,L)", "Pb(0,R)", "Pb(1,L)", "Nd(0)"});
}

TEST_CASE("enumerate_traces on the coin game") {
  Pcfa p = to_pcfa(load("coin_game.prob").program);
  auto ts = enumerate_traces(p, 4);
  REQUIRE(ts.size() == 2);
  for (const auto& t : ts) CHECK(t.size() == 4);
  CHECK(enumerate_traces(Pcfa::empty(), 10).empty());
  CHECK(enumerate_traces(p, 0).empty());
}

TEST_CASE("normalization: same-target pair, self-loop, fixpoint") {
  SUBCASE("paired branches into one location") {
    Pcfa a(3);
    a.set_accepting(2);
    a.add_transition(0, Label::pb(0, Dir::L), 1);
    a.add_transition(0, Label::pb(0, Dir::R), 1);
    a.add_transition(1, Label::skip(), 2);
    CHECK_FALSE(is_normalized(a));
    Pcfa n = normalize(a);
    CHECK(is_normalized(n));
    CHECK(n.num_locations() == 4);
    CHECK(reference_words(n, 6) == reference_words(a, 6));
  }
  SUBCASE("paired self-loop") {
    Pcfa a(2);
    a.set_accepting(1);
    a.add_transition(0, Label::pb(0, Dir::L), 0);
    a.add_transition(0, Label::pb(0, Dir::R), 0);
    a.add_transition(0, Label::skip(), 1);
    Pcfa n = normalize(a);
    CHECK(is_normalized(n));
    CHECK(reference_words(n, 8) == reference_words(a, 8));
  }
  SUBCASE("fixpoint and trivial cases") {
    Pcfa p = to_pcfa(load("coin_game.prob").program);
    CHECK(is_normalized(p));
    Pcfa n = normalize(p);
    CHECK(is_normalized(n));
    CHECK(reference_words(n, 20) == reference_words(p, 20));
    CHECK(is_normalized(Pcfa::empty()));
  }
  SUBCASE("non-CFMDP input is rejected") {
    Pcfa a(2);
    a.set_accepting(1);
    a.add_transition(0, Label::skip(), 1);
    a.add_transition(0, Label::skip(), 0);
    CHECK_THROWS_AS(normalize(a), std::invalid_argument);
  }
}

TEST_CASE("normalization on random CFMDPs") {
  Rng rng(202);
  int n = 0;
  CfmdpShape shape;
  shape.max_locations = 6;
  for (int i = 0; i < 150; ++i) {
    Pcfa a = random_cfmdp(rng, shape);
    std::size_t depth = 2 * a.num_locations();
    Pcfa b = normalize(a);
    INFO(a.dump());
    CHECK(is_normalized(b));
    CHECK(is_cfmdp(b));
    CHECK(reference_words(b, depth) == reference_words(a, depth));
    Pcfa c = normalize(b);
    CHECK(is_normalized(c));
    CHECK(reference_words(c, depth) == reference_words(a, depth));
    ++n;
  }
  CHECK(n >= 100);
}

TEST_CASE("residual, prepend, trie, universal") {
  SortMap s{{"X", Sort::Int}};
  Trace t1 = trace({"X := 0", "skip"}, s), t2 = trace({"X := 0", "Pb(0,L)"}, s);
  Pcfa tr = trie({t1, t2});
  CHECK(reference_words(tr, 4) == std::set<Trace>{t1, t2});
  Pcfa r = residual(tr, parse_label("X := 0", s));
  CHECK(reference_words(r, 4) == std::set<Trace>{Trace{Label::skip()}, Trace{Label::pb(0, Dir::L)}});
  Pcfa pre = prepend(Label::skip(), tr);
  CHECK(reference_accepts(pre, Trace{Label::skip(), t1[0], t1[1]}));
  Pcfa u = universal({Label::skip()});
  CHECK(reference_accepts(u, {}));
  CHECK(reference_accepts(u, Trace(5, Label::skip())));
}

TEST_CASE("dump format") {
  Pcfa a(2);
  a.set_accepting(1);
  a.add_transition(0, Label::skip(), 1);
  std::string d = a.dump();
  CHECK(d.find("init: 0") != std::string::npos);
  CHECK(d.find("accept: 1") != std::string::npos);
  CHECK(d.find("0 -[skip]-> 1") != std::string::npos);
}
