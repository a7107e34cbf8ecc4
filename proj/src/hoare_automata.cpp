#include "pta/hoare_automata.hpp"

#include "pta/interpolation.hpp"
#include "pta/semantics.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>

namespace pta {

FloydHoareAutomaton chain_automaton(const Trace& t, const std::vector<Formula>& props) {
  if (props.size() != t.size() + 1)
    throw std::invalid_argument("chain_automaton: need one proposition per location");
  FloydHoareAutomaton f{Pcfa(t.size() + 1), props};
  for (std::size_t i = 0; i < t.size(); ++i)
    f.base.add_transition(static_cast<Location>(i), t[i], static_cast<Location>(i + 1));
  f.base.set_accepting(static_cast<Location>(t.size()));
  return f;
}

FloydHoareAutomaton merge_same_proposition(const FloydHoareAutomaton& fha) {
  const Pcfa& a = fha.base;
  std::size_t n = a.num_locations();
  std::vector<Location> group(n);
  std::vector<Formula> lambda;
  std::map<std::string, Location> by_text;
  auto fresh = [&](const Formula& f) {
    lambda.push_back(f);
    return static_cast<Location>(lambda.size() - 1);
  };
  Location init = a.initial();
  group[init] = fresh(fha.lambda[init]);
  by_text[fha.lambda[init].to_string()] = group[init];
  std::string init_text = fha.lambda[init].to_string();
  // Accepting locations never fuse with the initial one.
  std::optional<Location> acc_same_as_init;
  for (Location l : a.accepting_locations()) {
    if (l == init) continue;
    std::string text = fha.lambda[l].to_string();
    if (text == init_text) {
      if (!acc_same_as_init) acc_same_as_init = fresh(fha.lambda[l]);
      group[l] = *acc_same_as_init;
      continue;
    }
    auto [it, added] = by_text.emplace(text, 0);
    if (added) it->second = fresh(fha.lambda[l]);
    group[l] = it->second;
  }
  for (Location l = 0; l < n; ++l) {
    if (l == init || a.is_accepting(l)) continue;
    auto [it, added] = by_text.emplace(fha.lambda[l].to_string(), 0);
    if (added) it->second = fresh(fha.lambda[l]);
    group[l] = it->second;
  }
  FloydHoareAutomaton out{Pcfa(lambda.size()), lambda};
  out.base.set_initial(group[init]);
  for (Location l = 0; l < n; ++l)
    if (a.is_accepting(l)) out.base.set_accepting(group[l]);
  for (const auto& tr : a.transitions())
    out.base.add_transition(group[tr.source], tr.label, group[tr.target]);
  return out;
}

FloydHoareAutomaton saturate_edges(const FloydHoareAutomaton& fha, const std::vector<Label>& sigma,
                                   Solver& solver) {
  FloydHoareAutomaton out = fha;
  std::size_t n = fha.base.num_locations();
  for (Location i = 0; i < n; ++i)
    for (Location j = 0; j < n; ++j)
      for (const auto& s : sigma)
        if (hoare_valid(fha.lambda[i], s, fha.lambda[j], solver)) out.base.add_transition(i, s, j);
  return out;
}

bool check_floyd_hoare(const FloydHoareAutomaton& fha, Solver& solver) {
  if (fha.lambda.size() != fha.base.num_locations()) return false;
  for (const auto& tr : fha.base.transitions())
    if (!hoare_valid(fha.lambda[tr.source], tr.label, fha.lambda[tr.target], solver)) return false;
  return true;
}

namespace {

std::vector<Label> with_trace_labels(std::vector<Label> sigma, const Trace& t) {
  sigma.insert(sigma.end(), t.begin(), t.end());
  std::sort(sigma.begin(), sigma.end());
  sigma.erase(std::unique(sigma.begin(), sigma.end()), sigma.end());
  return sigma;
}

FloydHoareAutomaton finish(const Trace& t, std::vector<Formula> props,
                           const std::vector<Label>& sigma, Solver& solver) {
  for (auto& p : props) p = solver.simplify(p);
  FloydHoareAutomaton chain = chain_automaton(t, props);
  return saturate_edges(merge_same_proposition(chain), with_trace_labels(sigma, t), solver);
}

}  // namespace

FloydHoareAutomaton generalize_nonviolating(const Trace& t, const Specification& spec,
                                            const std::vector<Label>& sigma, Solver& solver) {
  if (classify(t, spec, solver).violating)
    throw std::invalid_argument("generalize_nonviolating: trace " + to_string(t) + " is violating");
  std::vector<Formula> props{spec.pre};
  if (t.empty()) return chain_automaton(t, props);
  for (const auto& i : sequence_interpolants(spec.pre, t, !spec.post, solver)) props.push_back(i);
  Formula last = props.back();
  props.push_back(hoare_valid(last, t.back(), Formula::make_false(), solver) ? Formula::make_false()
                                                                             : spec.post);
  return finish(t, std::move(props), sigma, solver);
}

FloydHoareAutomaton generalize_violating(const Trace& t, const Specification& spec,
                                         const std::vector<Label>& sigma, Solver& solver) {
  TraceClass c = classify(t, spec, solver);
  if (!c.violating)
    throw std::invalid_argument("generalize_violating: trace " + to_string(t) + " is not violating");
  std::vector<Formula> props(t.size() + 1);
  props[t.size()] = !spec.post;
  for (std::size_t k = t.size(); k-- > 1;) props[k] = solver.simplify(pre_exists(t[k], props[k + 1]));
  props[0] = c.error_pre;
  return finish(t, std::move(props), sigma, solver);
}

}  // namespace pta
