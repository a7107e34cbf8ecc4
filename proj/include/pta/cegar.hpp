#pragma once

#include "pta/evidence.hpp"
#include "pta/hoare_automata.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pta {

struct Verdict {
  enum class Kind { Sat, Unsat, Inconclusive };
  Kind kind = Kind::Inconclusive;
  Rational upper_bound = 0;                     // Sat
  std::optional<Counterexample> counterexample;  // Unsat
  std::string reason;                            // Inconclusive
  std::size_t iterations = 0;                    // traces picked from the uncovered residue
  std::size_t traces = 0;                        // traces classified overall
};

std::string to_string(Verdict::Kind k);

struct VerifyOptions {
  std::size_t max_iterations = 500;
  ExamineOptions examine;
};

/// Progress messages, one per line, when a sink is given.
using VerifyLog = std::vector<std::string>;

Verdict verify(const Pcfa& program, const Specification& spec, const Rational& beta, Solver& solver,
               const VerifyOptions& options = {}, VerifyLog* log = nullptr);

/// Keeps the exact set of violating traces found so far instead of
/// generalizing them; terminates with Unsat whenever the property fails.
Verdict verify_refutational(const Pcfa& program, const Specification& spec, const Rational& beta,
                            Solver& solver, const VerifyOptions& options = {},
                            VerifyLog* log = nullptr);

/// Best common-precondition subset of violating traces: the heaviest
/// mergeable subset whose path conditions are jointly satisfiable.
Counterexample max_violation_mass(const std::vector<Trace>& traces, const Specification& spec,
                                  Solver& solver);

struct DecompositionResult {
  bool certified = false;
  Rational upper_bound = 0;
  std::string reason;  // when rejected
};

/// Checks a decomposition of the program into certified automata `qs` and a
/// violating module `a` whose upper bound does not exceed `beta`.
DecompositionResult check_decomposition(const Pcfa& program, const Specification& spec,
                                        const Rational& beta,
                                        const std::vector<FloydHoareAutomaton>& qs, const Pcfa& a,
                                        Solver& solver);

}  // namespace pta
