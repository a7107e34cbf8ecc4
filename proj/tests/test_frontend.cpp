#include "test_support.hpp"

#include <doctest.h>

using namespace pta;
using namespace pta::test;

namespace {

int count_kind(const Stmt& s, Stmt::Kind k, std::vector<int>* ids = nullptr) {
  int n = s.kind == k ? 1 : 0;
  if (n && ids) ids->push_back(s.id);
  for (const auto& c : s.body) n += count_kind(c, k, ids);
  return n;
}

std::string parse_error(const std::string& src) {
  try {
    parse(src);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("the coin game parses into one loop and two coins") {
  ParsedFile f = load("coin_game.prob");
  std::vector<int> ids;
  CHECK(count_kind(f.program.body, Stmt::Kind::While) == 1);
  CHECK(count_kind(f.program.body, Stmt::Kind::ProbChoice, &ids) == 2);
  CHECK(ids == std::vector<int>{0, 1});
  CHECK(f.spec.pre.is_true());
  CHECK(f.spec.post == formula("X = 0", coin_sorts()));
  CHECK(f.spec.beta == Rational(3) / 10);
}

TEST_CASE("straight-line program") {
  ParsedFile f = parse("@pre true\n@post X = 0\n@beta 0\nint X;\nX := 0\n");
  CHECK(f.program.body.kind == Stmt::Kind::Assign);
  CHECK(f.spec.beta == 0);
  Pcfa p = to_pcfa(f.program);
  CHECK(p.num_locations() == 2);
  CHECK(p.num_transitions() == 1);
}

TEST_CASE("rejections carry positions") {
  CHECK(parse_error("int X, Y;\nX := X + Y*Y").find("nonlinear") != std::string::npos);
  CHECK(parse_error("int X;\nZ := 1").find("undeclared") != std::string::npos);
  CHECK(parse_error("@beta 3/2\nint X;\nX := 1").find("beta") != std::string::npos);
  CHECK(parse_error("int X, X;\nX := 1").find("twice") != std::string::npos);
  CHECK(parse_error("@post Y = 0\nint X;\nX := 1").find("undeclared") != std::string::npos);
  try {
    parse("int X;\nX := 1;\nX := := 2");
    FAIL("expected a syntax error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() > 1);
  }
}

TEST_CASE("booleans and linear arithmetic") {
  ParsedFile f = parse("@post B || X >= 2*Y\nint X, Y;\nbool B;\nB := X > 0 && !B; X := 3*X - (Y - 2)\n");
  CHECK(f.program.decls.size() == 3);
  Pcfa p = to_pcfa(f.program);
  auto t = shortest_accepted_trace(p);
  REQUIRE(t);
  REQUIRE(t->size() == 2);
  State s{{"X", 1}, {"Y", 5}, {"B", 0}};
  auto out = interpret_trace(*t, s);
  REQUIRE(out);
  CHECK(out->at("B") == 1);
  CHECK(out->at("X") == 0);
}

TEST_CASE("to_pcfa of the coin game matches a hand-built automaton") {
  Pcfa p = to_pcfa(load("coin_game.prob").program);
  CHECK(p.num_locations() == 10);
  CHECK(p.is_deterministic());
  CHECK(is_cfmdp(p));
  CHECK(p.out(p.accepting()).empty());
  Pcfa fig = hand_built_cfa();
  CHECK(reference_words(p, 24) == reference_words(fig, 24));
}

TEST_CASE("skip-only and single-coin shapes") {
  Pcfa skip = to_pcfa(parse("skip").program);
  CHECK(skip.num_locations() == 2);
  REQUIRE(skip.num_transitions() == 1);
  CHECK(skip.transitions()[0].label == Label::skip());

  Pcfa diamond = to_pcfa(parse("int X;\n{ X := 0 } <+> { X := 1 }").program);
  auto words = reference_words(diamond, 5);
  SortMap s{{"X", Sort::Int}};
  CHECK(words == std::set<Trace>{trace({"Pb(0,L)", "X := 0"}, s), trace({"Pb(0,R)", "X := 1"}, s)});
  CHECK(diamond.num_locations() == 4);
}

TEST_CASE("choice identifiers are lexical and nondeterministic branches get their own tags") {
  ParsedFile f = parse("int X;\n{ X := 0 } <*> { X := 1 }; { skip } <+> { X := 2 }; { X := 3 } <*> { skip }");
  std::vector<int> nd, pb;
  count_kind(f.program.body, Stmt::Kind::NondetChoice, &nd);
  count_kind(f.program.body, Stmt::Kind::ProbChoice, &pb);
  CHECK(nd == std::vector<int>{0, 2});
  CHECK(pb == std::vector<int>{1});
  Pcfa p = to_pcfa(f.program);
  std::set<std::string> tags;
  for (const auto& l : p.alphabet())
    if (l.kind() == LabelKind::Nd) tags.insert(l.to_string());
  CHECK(tags == std::set<std::string>{"Nd(0)", "Nd(1)", "Nd(4)", "Nd(5)"});
}

TEST_CASE("random programs: determinism, prefix freedom, round trip") {
  Rng rng(31);
  for (int i = 0; i < 150; ++i) {
    ProgramShape shape;
    shape.loops = i % 3 == 0;
    std::string src = random_program(rng, shape, "1/4");
    INFO(src);
    ParsedFile f = parse(src);
    Pcfa p = to_pcfa(f.program);
    CHECK(p.is_deterministic());
    CHECK(p.accepting_locations().size() == 1);
    CHECK(p.out(p.accepting()).empty());
    ParsedFile g = parse(pretty_print(f));
    CHECK(g.program == f.program);
    CHECK(g.spec.pre == f.spec.pre);
    CHECK(g.spec.post == f.spec.post);
    CHECK(g.spec.beta == f.spec.beta);
  }
}

TEST_CASE("labels parse back from their printed form") {
  SortMap s{{"X", Sort::Int}, {"C", Sort::Int}, {"B", Sort::Bool}};
  for (const char* text : {"X := X + 1", "assume C >= 1", "skip", "Pb(0,L)", "Pb(3,R)", "Nd(7)", "B := !B",
                           "C := C - 1"}) {
    Label l = parse_label(text, s);
    CHECK(parse_label(l.to_string(), s) == l);
  }
  CHECK(parse_label("assume C > 0", s).to_string() == "assume C >= 1");
  CHECK_THROWS_AS(parse_label("Pb(0,Q)", s), ParseError);
}
