#pragma once

#include "pta/pcfa.hpp"

#include <map>
#include <optional>
#include <set>
#include <utility>
#include <variant>
#include <vector>

namespace pta {

/// A coin identifier (both Pb branches of that id) or a non-probabilistic label.
using Action = std::variant<int, Label>;

std::string to_string(const Action& a);
/// Actions available at a location: coin ids first in id order, then labels.
std::vector<Action> actions_at(const Pcfa& a, Location l);

/// Finite-memory strategy: internal states 0..num_states-1 and a partial
/// map (location, state) -> (action, next state).
struct Strategy {
  std::size_t num_states = 1;
  std::size_t initial = 0;
  std::map<std::pair<Location, std::size_t>, std::pair<Action, std::size_t>> delta;
  /// (accepting location, state) pairs that count as defined when deciding
  /// whether a coin branch is live.
  std::set<std::pair<Location, std::size_t>> finals;

  std::optional<std::pair<Action, std::size_t>> at(Location l, std::size_t q) const;
  bool defined(Location l, std::size_t q) const;
};

/// At most one action per location.
bool is_cfmc(const Pcfa& a);

/// Product of a CFMDP with a strategy. Accepting locations of `a` map to a
/// single fresh accepting location; a coin branch whose target is not
/// defined is dropped when its partner is defined. Throws
/// std::invalid_argument on malformed strategies.
Pcfa apply_strategy(const Pcfa& a, const Strategy& s);

/// Strategy whose application to `a` yields exactly L(m). Requires a
/// normalized CFMDP `a`, a CFMC `m`, and L(m) a subset of L(a).
Strategy strategy_for_sublanguage(const Pcfa& a, const Pcfa& m);

struct UpperBound {
  Rational value;
  Strategy strategy;                 // memoryless, undefined where the value is 0
  std::vector<Rational> per_location;
};

/// Maximum probability of reaching an accepting location when each coin id
/// is a fair choice (a missing branch loses its half) and every other label
/// is a deterministic action. Exact policy iteration.
UpperBound mdp_upper_bound(const Pcfa& a);

/// The CFMC induced by the optimal strategy of mdp_upper_bound (trimmed).
Pcfa reason_cfmc(const Pcfa& a);

/// Prefix tree of the traces as a CFMC, if branching happens only at
/// Pb(i,L)/Pb(i,R) pairs and no trace is a proper prefix of another.
std::optional<Pcfa> merge_traces(const std::vector<Trace>& traces);

}  // namespace pta
