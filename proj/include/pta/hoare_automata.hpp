#pragma once

#include "pta/frontend.hpp"
#include "pta/pcfa.hpp"
#include "pta/solver.hpp"

#include <vector>

namespace pta {

/// A PCFA whose locations carry propositions; every edge (l, s, l') is a
/// valid Hoare triple {lambda[l]} s {lambda[l']}.
struct FloydHoareAutomaton {
  Pcfa base;
  std::vector<Formula> lambda;
};

/// Certified automaton for a trace all of whose executions from the
/// precondition satisfy the postcondition (or block). Throws
/// std::invalid_argument if the trace is violating.
FloydHoareAutomaton generalize_nonviolating(const Trace& t, const Specification& spec,
                                            const std::vector<Label>& sigma, Solver& solver);

/// Over-approximation around a violating trace: the head is its path
/// condition, interior propositions are backward pre_exists folds from the
/// negated postcondition. Throws std::invalid_argument if not violating.
FloydHoareAutomaton generalize_violating(const Trace& t, const Specification& spec,
                                         const std::vector<Label>& sigma, Solver& solver);

/// Chain automaton for `t` with the given propositions (size |t| + 1).
FloydHoareAutomaton chain_automaton(const Trace& t, const std::vector<Formula>& props);

/// Fuses locations whose propositions print identically. The initial and the
/// accepting location stay apart.
FloydHoareAutomaton merge_same_proposition(const FloydHoareAutomaton& fha);

/// Adds every valid edge over `sigma` between every pair of locations.
FloydHoareAutomaton saturate_edges(const FloydHoareAutomaton& fha, const std::vector<Label>& sigma,
                                   Solver& solver);

/// Re-checks every edge.
bool check_floyd_hoare(const FloydHoareAutomaton& fha, Solver& solver);

}  // namespace pta
