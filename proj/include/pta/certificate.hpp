#pragma once

#include "pta/hoare_automata.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pta {

/// A decomposition certificate: certified automata with propositions, one
/// violating automaton, and optionally the threshold it is meant for.
///
///   beta 1/2
///   automaton Q A1
///   init: 0
///   accept: 1
///   lambda 0: true
///   lambda 1: X = 0
///   0 -[X := 0]-> 1
///   1 -[* \ {X := X + 1}]-> 1
///   end
///   automaton A A3
///   ...
///   end
///
/// `*` stands for every label of the program alphabet; `* \ {a; b}` for all
/// but the listed ones. Lines starting with `#` are comments.
struct CertificateFile {
  std::optional<Rational> beta;
  std::vector<std::string> q_names;
  std::vector<FloydHoareAutomaton> qs;
  std::string a_name;
  Pcfa a = Pcfa::empty();
};

/// Throws ParseError with a line number on malformed input.
CertificateFile parse_certificate(std::string_view text, const SortMap& sorts,
                                  const std::vector<Label>& sigma);
CertificateFile parse_certificate_file(const std::string& path, const SortMap& sorts,
                                       const std::vector<Label>& sigma);
std::string write_certificate(const CertificateFile& cert);

}  // namespace pta
