#include "pta/certificate.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace pta;
using namespace pta::test;

namespace {

const SortMap& S() { return coin_sorts(); }

std::vector<Label> sigma() { return to_pcfa(load("coin_game.prob").program).alphabet(); }

std::string fixture() {
  std::ifstream in(data_path("coin_game.cert"));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int error_line(const std::string& text) {
  try {
    parse_certificate(text, S(), sigma());
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_CASE("the coin game decomposition parses") {
  Solver s = builtin_solver();
  CertificateFile c = parse_certificate_file(data_path("coin_game.cert"), S(), sigma());
  REQUIRE(c.beta);
  CHECK(*c.beta == Rational(1, 2));
  CHECK(c.q_names == std::vector<std::string>{"A1", "A2"});
  CHECK(c.a_name == "A3");
  REQUIRE(c.qs.size() == 2);
  CHECK(c.qs[0].lambda.size() == 2);
  CHECK(c.qs[1].lambda.size() == 3);
  CHECK(c.qs[1].lambda[1].is_false());
  for (const auto& q : c.qs) CHECK(check_floyd_hoare(q, s));
  CHECK(c.a.num_locations() == 3);
  // `* \ {X := X + 1}` leaves every other label on the self-loop.
  std::size_t loop = 0;
  for (const auto& e : c.qs[0].base.out(1))
    if (e.target == 1) ++loop;
  CHECK(loop == sigma().size() - 1);
  CHECK(reference_accepts(c.qs[0].base, trace({"C := 0", "X := 0", "skip"}, S())));
  CHECK_FALSE(reference_accepts(c.qs[0].base, trace({"X := 0", "X := X + 1"}, S())));
}

TEST_CASE("malformed certificates report their line") {
  std::string head = "beta 1/2\nautomaton Q A\ninit: 0\naccept: 1\nlambda 0: true\nlambda 1: X = 0\n";
  CHECK(error_line(head + "0 -[X := 0]-> 1\nend\nautomaton A B\ninit: 0\naccept: 0\nend\n") == -1);
  CHECK(error_line(head + "0 -[X := X * X]-> 1\nend\n") == 7);
  CHECK(error_line(head + "0 -[Z := 0]-> 1\nend\n") == 7);
  CHECK(error_line(head + "0 -[X := 0]-> 1\n") > 0);
  CHECK(error_line("beta 2\n") == 1);
  CHECK(error_line("automaton R A\nend\n") == 1);
  CHECK(error_line(head + "lambda 1: X = = 0\nend\n") == 7);
  CHECK(error_line(head + "0 -[X := 0]-> 1\nend\nautomaton A B\ninit: 0\naccept: 0\nend\n"
                          "automaton A C\ninit: 0\naccept: 0\nend\n") == 13);
  CHECK(error_line("frobnicate\n") == 1);
  CHECK_THROWS(parse_certificate_file(data_path("missing.cert"), S(), sigma()));
}

TEST_CASE("comments and blank lines are ignored") {
  std::string text = "# header\n\nautomaton A M\n# inside\ninit: 0\naccept: 1\n0 -[skip]-> 1\nend\n";
  CertificateFile c = parse_certificate(text, S(), sigma());
  CHECK_FALSE(c.beta);
  CHECK(c.qs.empty());
  CHECK(reference_accepts(c.a, Trace{Label::skip()}));
}

TEST_CASE("writing and reading back preserves the certificate") {
  CertificateFile c = parse_certificate(fixture(), S(), sigma());
  std::string text = write_certificate(c);
  CertificateFile d = parse_certificate(text, S(), sigma());
  CHECK(d.beta == c.beta);
  CHECK(d.q_names == c.q_names);
  CHECK(d.a_name == c.a_name);
  REQUIRE(d.qs.size() == c.qs.size());
  for (std::size_t i = 0; i < c.qs.size(); ++i) {
    CHECK(d.qs[i].lambda == c.qs[i].lambda);
    CHECK(reference_words(d.qs[i].base, 4) == reference_words(c.qs[i].base, 4));
  }
  CHECK(reference_words(d.a, 4) == reference_words(c.a, 4));
  CHECK(write_certificate(d) == text);
}
