#pragma once

#include "pta/label.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pta {

using Location = std::uint32_t;

struct Edge {
  Label label;
  Location target;
};

struct Transition {
  Location source;
  Label label;
  Location target;
};

/// Finite automaton over labels with one initial location and a set of
/// accepting locations (a single one for everything built from programs).
class Pcfa {
 public:
  /// One location (initial, not accepting).
  Pcfa();
  explicit Pcfa(std::size_t num_locations);
  /// Two locations, no transitions: initial 0, accepting 1.
  static Pcfa empty();

  Location add_location();
  /// Adds (from, label, to); duplicates are ignored.
  void add_transition(Location from, const Label& label, Location to);
  void set_initial(Location l);
  void set_accepting(Location l, bool accepting = true);
  void clear_accepting();

  std::size_t num_locations() const { return out_.size(); }
  Location initial() const { return initial_; }
  bool is_accepting(Location l) const { return accepting_[l]; }
  std::vector<Location> accepting_locations() const;
  /// The unique accepting location; throws if there is not exactly one.
  Location accepting() const;

  const std::vector<Edge>& out(Location l) const { return out_[l]; }
  std::optional<Location> step(Location l, const Label& label) const;  // first match
  std::vector<Transition> transitions() const;
  std::size_t num_transitions() const;
  /// Sorted distinct labels occurring on transitions.
  std::vector<Label> alphabet() const;

  bool is_deterministic() const;
  /// `init: n`, `accept: n...`, then one `src -[label]-> dst` per transition.
  std::string dump() const;

 private:
  std::vector<std::vector<Edge>> out_;
  Location initial_ = 0;
  std::vector<bool> accepting_;
};

bool accepts(const Pcfa& a, const Trace& t);

Pcfa trim(const Pcfa& a);
bool is_empty(const Pcfa& a);
Pcfa determinize(const Pcfa& a);
Pcfa minimize(const Pcfa& a);
Pcfa intersect(const Pcfa& a, const Pcfa& b);
Pcfa difference(const Pcfa& a, const Pcfa& b);
Pcfa unite(const Pcfa& a, const Pcfa& b);
Pcfa unite(const std::vector<Pcfa>& parts);
/// Words w such that label.w is accepted.
Pcfa residual(const Pcfa& a, const Label& label);
/// Automaton accepting exactly `prefix` followed by a word of `a`.
Pcfa prepend(const Label& prefix, const Pcfa& a);
/// Automaton accepting exactly the given traces (a prefix tree).
Pcfa trie(const std::vector<Trace>& traces);
/// Every word over `sigma` (one location, accepting, with self-loops).
Pcfa universal(const std::vector<Label>& sigma);

std::optional<Trace> shortest_accepted_trace(const Pcfa& a);

/// Deterministic with no transitions leaving accepting locations.
bool is_cfmdp(const Pcfa& a);
/// Every location with both Pb(i,L) and Pb(i,R) sends them to distinct targets.
bool is_normalized(const Pcfa& a);
/// Language-preserving normalization of a CFMDP; throws std::invalid_argument otherwise.
Pcfa normalize(const Pcfa& a);

/// Accepting locations without outgoing transitions are fused into one.
Pcfa merge_accepting(const Pcfa& a);

/// Accepted traces up to `max_len`, shortest first, then by label order.
std::vector<Trace> enumerate_traces(const Pcfa& a, std::size_t max_len,
                                    std::size_t limit = SIZE_MAX);
/// Bounded language equality: same accepted traces up to `depth`.
bool bounded_language_equal(const Pcfa& a, const Pcfa& b, std::size_t depth);

}  // namespace pta
