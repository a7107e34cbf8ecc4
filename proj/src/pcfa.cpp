#include "pta/pcfa.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace pta {

Pcfa::Pcfa() : Pcfa(1) {}

Pcfa::Pcfa(std::size_t n) : out_(n), accepting_(n, false) {
  if (n == 0) throw std::invalid_argument("automaton needs at least one location");
}

Pcfa Pcfa::empty() {
  Pcfa a(2);
  a.set_accepting(1);
  return a;
}

Location Pcfa::add_location() {
  out_.emplace_back();
  accepting_.push_back(false);
  return static_cast<Location>(out_.size() - 1);
}

void Pcfa::add_transition(Location from, const Label& label, Location to) {
  if (from >= out_.size() || to >= out_.size()) throw std::out_of_range("transition endpoint");
  for (const auto& e : out_[from])
    if (e.target == to && e.label == label) return;
  out_[from].push_back({label, to});
}

void Pcfa::set_initial(Location l) {
  if (l >= out_.size()) throw std::out_of_range("initial location");
  initial_ = l;
}

void Pcfa::set_accepting(Location l, bool accepting) {
  if (l >= out_.size()) throw std::out_of_range("accepting location");
  accepting_[l] = accepting;
}

void Pcfa::clear_accepting() { std::fill(accepting_.begin(), accepting_.end(), false); }

std::vector<Location> Pcfa::accepting_locations() const {
  std::vector<Location> r;
  for (Location l = 0; l < out_.size(); ++l)
    if (accepting_[l]) r.push_back(l);
  return r;
}

Location Pcfa::accepting() const {
  auto acc = accepting_locations();
  if (acc.size() != 1)
    throw std::logic_error("automaton has " + std::to_string(acc.size()) + " accepting locations");
  return acc.front();
}

std::optional<Location> Pcfa::step(Location l, const Label& label) const {
  for (const auto& e : out_[l])
    if (e.label == label) return e.target;
  return std::nullopt;
}

std::vector<Transition> Pcfa::transitions() const {
  std::vector<Transition> r;
  for (Location l = 0; l < out_.size(); ++l)
    for (const auto& e : out_[l]) r.push_back({l, e.label, e.target});
  std::sort(r.begin(), r.end(), [](const Transition& a, const Transition& b) {
    if (a.source != b.source) return a.source < b.source;
    if (a.label != b.label) return a.label < b.label;
    return a.target < b.target;
  });
  return r;
}

std::size_t Pcfa::num_transitions() const {
  std::size_t n = 0;
  for (const auto& es : out_) n += es.size();
  return n;
}

std::vector<Label> Pcfa::alphabet() const {
  std::set<Label> s;
  for (const auto& es : out_)
    for (const auto& e : es) s.insert(e.label);
  return {s.begin(), s.end()};
}

bool Pcfa::is_deterministic() const {
  for (const auto& es : out_) {
    std::set<Label> seen;
    for (const auto& e : es)
      if (!seen.insert(e.label).second) return false;
  }
  return true;
}

std::string Pcfa::dump() const {
  std::ostringstream os;
  os << "init: " << initial_ << "\n";
  os << "accept:";
  for (auto l : accepting_locations()) os << " " << l;
  os << "\n";
  for (const auto& t : transitions())
    os << t.source << " -[" << t.label.to_string() << "]-> " << t.target << "\n";
  return os.str();
}

bool accepts(const Pcfa& a, const Trace& t) {
  std::set<Location> cur{a.initial()};
  for (const auto& l : t) {
    std::set<Location> next;
    for (auto s : cur)
      for (const auto& e : a.out(s))
        if (e.label == l) next.insert(e.target);
    if (next.empty()) return false;
    cur = std::move(next);
  }
  for (auto s : cur)
    if (a.is_accepting(s)) return true;
  return false;
}

namespace {

std::vector<Edge> sorted_edges(const Pcfa& a, Location l) {
  std::vector<Edge> es = a.out(l);
  std::sort(es.begin(), es.end(), [](const Edge& x, const Edge& y) {
    if (x.label != y.label) return x.label < y.label;
    return x.target < y.target;
  });
  return es;
}

// Keeps only locations in `keep`, renumbered in breadth-first order from the initial one.
Pcfa restrict_to(const Pcfa& a, const std::vector<bool>& keep) {
  std::vector<std::int64_t> id(a.num_locations(), -1);
  std::vector<Location> order;
  std::deque<Location> queue{a.initial()};
  id[a.initial()] = 0;
  order.push_back(a.initial());
  while (!queue.empty()) {
    Location l = queue.front();
    queue.pop_front();
    for (const auto& e : sorted_edges(a, l)) {
      if (!keep[e.target] || id[e.target] >= 0) continue;
      id[e.target] = static_cast<std::int64_t>(order.size());
      order.push_back(e.target);
      queue.push_back(e.target);
    }
  }
  Pcfa r(order.size());
  for (Location l : order) {
    Location nl = static_cast<Location>(id[l]);
    if (a.is_accepting(l)) r.set_accepting(nl);
    for (const auto& e : sorted_edges(a, l))
      if (keep[e.target]) r.add_transition(nl, e.label, static_cast<Location>(id[e.target]));
  }
  return r;
}

}  // namespace

Pcfa trim(const Pcfa& a) {
  std::size_t n = a.num_locations();
  std::vector<bool> fwd(n, false), bwd(n, false);
  std::vector<Location> stack{a.initial()};
  fwd[a.initial()] = true;
  std::vector<std::vector<Location>> preds(n);
  for (Location l = 0; l < n; ++l)
    for (const auto& e : a.out(l)) preds[e.target].push_back(l);
  while (!stack.empty()) {
    Location l = stack.back();
    stack.pop_back();
    for (const auto& e : a.out(l))
      if (!fwd[e.target]) {
        fwd[e.target] = true;
        stack.push_back(e.target);
      }
  }
  for (Location l = 0; l < n; ++l)
    if (a.is_accepting(l)) {
      bwd[l] = true;
      stack.push_back(l);
    }
  while (!stack.empty()) {
    Location l = stack.back();
    stack.pop_back();
    for (auto p : preds[l])
      if (!bwd[p]) {
        bwd[p] = true;
        stack.push_back(p);
      }
  }
  if (!bwd[a.initial()]) return Pcfa::empty();
  std::vector<bool> keep(n);
  for (Location l = 0; l < n; ++l) keep[l] = fwd[l] && bwd[l];
  return restrict_to(a, keep);
}

bool is_empty(const Pcfa& a) {
  std::vector<bool> seen(a.num_locations(), false);
  std::vector<Location> stack{a.initial()};
  seen[a.initial()] = true;
  while (!stack.empty()) {
    Location l = stack.back();
    stack.pop_back();
    if (a.is_accepting(l)) return false;
    for (const auto& e : a.out(l))
      if (!seen[e.target]) {
        seen[e.target] = true;
        stack.push_back(e.target);
      }
  }
  return true;
}

Pcfa merge_accepting(const Pcfa& a) {
  std::vector<Location> sinks;
  for (auto l : a.accepting_locations())
    if (a.out(l).empty()) sinks.push_back(l);
  if (sinks.size() <= 1) return a;
  std::vector<Location> map(a.num_locations());
  Location next = 0;
  Location merged = 0;
  bool have = false;
  for (Location l = 0; l < a.num_locations(); ++l) {
    bool sink = a.is_accepting(l) && a.out(l).empty();
    if (sink && have) {
      map[l] = merged;
      continue;
    }
    map[l] = next++;
    if (sink) {
      merged = map[l];
      have = true;
    }
  }
  Pcfa r(next);
  r.set_initial(map[a.initial()]);
  for (Location l = 0; l < a.num_locations(); ++l) {
    if (a.is_accepting(l)) r.set_accepting(map[l]);
    for (const auto& e : a.out(l)) r.add_transition(map[l], e.label, map[e.target]);
  }
  return trim(r);
}

namespace {

enum class Mode { Intersect, Difference, Union };

using Subset = std::vector<Location>;

bool any_accepting(const Pcfa& a, const Subset& s) {
  for (auto l : s)
    if (a.is_accepting(l)) return true;
  return false;
}

// On-the-fly product of the subset automata of a and b.
Pcfa product(const Pcfa& a, const Pcfa& b, Mode mode) {
  using Key = std::pair<Subset, Subset>;
  std::map<Key, Location> ids;
  std::vector<Key> states;
  Pcfa r(1);
  Key start{{a.initial()}, {b.initial()}};
  ids.emplace(start, 0);
  states.push_back(start);
  for (std::size_t i = 0; i < states.size(); ++i) {
    Key cur = states[i];
    bool acc_a = any_accepting(a, cur.first), acc_b = any_accepting(b, cur.second);
    bool acc = mode == Mode::Intersect    ? acc_a && acc_b
               : mode == Mode::Difference ? acc_a && !acc_b
                                          : acc_a || acc_b;
    if (acc) r.set_accepting(static_cast<Location>(i));
    std::map<Label, std::pair<std::set<Location>, std::set<Location>>> moves;
    for (auto l : cur.first)
      for (const auto& e : a.out(l)) moves[e.label].first.insert(e.target);
    for (auto l : cur.second)
      for (const auto& e : b.out(l)) moves[e.label].second.insert(e.target);
    for (auto& [label, targets] : moves) {
      Key next{{targets.first.begin(), targets.first.end()},
               {targets.second.begin(), targets.second.end()}};
      bool ok = mode == Mode::Intersect    ? !next.first.empty() && !next.second.empty()
                : mode == Mode::Difference ? !next.first.empty()
                                           : true;
      if (!ok) continue;
      auto [it, fresh] = ids.emplace(next, static_cast<Location>(states.size()));
      if (fresh) {
        states.push_back(next);
        r.add_location();
      }
      r.add_transition(static_cast<Location>(i), label, it->second);
    }
  }
  return merge_accepting(trim(r));
}

}  // namespace

Pcfa determinize(const Pcfa& a) { return product(a, Pcfa(), Mode::Difference); }

Pcfa intersect(const Pcfa& a, const Pcfa& b) { return product(a, b, Mode::Intersect); }

Pcfa difference(const Pcfa& a, const Pcfa& b) { return product(a, b, Mode::Difference); }

Pcfa unite(const Pcfa& a, const Pcfa& b) { return product(a, b, Mode::Union); }

Pcfa unite(const std::vector<Pcfa>& parts) {
  if (parts.empty()) return Pcfa::empty();
  // Disjoint union with a shared fresh initial location is cheaper than
  // chained products; determinize only when asked.
  Pcfa r(1);
  for (const auto& p : parts) {
    Location base = static_cast<Location>(r.num_locations());
    for (std::size_t i = 0; i < p.num_locations(); ++i) r.add_location();
    for (Location l = 0; l < p.num_locations(); ++l) {
      if (p.is_accepting(l)) r.set_accepting(base + l);
      for (const auto& e : p.out(l)) r.add_transition(base + l, e.label, base + e.target);
    }
    if (p.is_accepting(p.initial())) r.set_accepting(0);
    for (const auto& e : p.out(p.initial())) r.add_transition(0, e.label, base + e.target);
  }
  return determinize(r);
}

Pcfa residual(const Pcfa& a, const Label& label) {
  Pcfa r = a;
  Location n = r.add_location();
  for (const auto& e : a.out(a.initial())) {
    if (!(e.label == label)) continue;
    if (a.is_accepting(e.target)) r.set_accepting(n);
    for (const auto& f : a.out(e.target)) r.add_transition(n, f.label, f.target);
  }
  r.set_initial(n);
  return merge_accepting(trim(r));
}

Pcfa prepend(const Label& prefix, const Pcfa& a) {
  Pcfa r = a;
  Location n = r.add_location();
  r.add_transition(n, prefix, a.initial());
  r.set_initial(n);
  return trim(r);
}

Pcfa trie(const std::vector<Trace>& traces) {
  Pcfa r(1);
  bool any = false;
  for (const auto& t : traces) {
    Location cur = 0;
    for (const auto& l : t) {
      auto next = r.step(cur, l);
      if (!next) {
        Location n = r.add_location();
        r.add_transition(cur, l, n);
        next = n;
      }
      cur = *next;
    }
    r.set_accepting(cur);
    any = true;
  }
  if (!any) return Pcfa::empty();
  return merge_accepting(trim(r));
}

Pcfa universal(const std::vector<Label>& sigma) {
  Pcfa r(1);
  r.set_accepting(0);
  for (const auto& l : sigma) r.add_transition(0, l, 0);
  return r;
}

Pcfa minimize(const Pcfa& input) {
  Pcfa a = determinize(input);
  std::size_t n = a.num_locations();
  std::vector<std::size_t> block(n);
  for (Location l = 0; l < n; ++l) block[l] = a.is_accepting(l) ? 1 : 0;
  std::size_t count = 0;
  while (true) {
    std::map<std::pair<std::size_t, std::vector<std::pair<Label, std::size_t>>>, std::size_t> sigs;
    std::vector<std::size_t> next(n);
    for (Location l = 0; l < n; ++l) {
      std::vector<std::pair<Label, std::size_t>> sig;
      for (const auto& e : a.out(l)) sig.emplace_back(e.label, block[e.target]);
      std::sort(sig.begin(), sig.end());
      auto key = std::make_pair(block[l], std::move(sig));
      auto it = sigs.find(key);
      if (it == sigs.end()) it = sigs.emplace(std::move(key), sigs.size()).first;
      next[l] = it->second;
    }
    block = std::move(next);
    if (sigs.size() == count) break;
    count = sigs.size();
  }
  Pcfa r(count);
  r.set_initial(static_cast<Location>(block[a.initial()]));
  for (Location l = 0; l < n; ++l) {
    if (a.is_accepting(l)) r.set_accepting(static_cast<Location>(block[l]));
    for (const auto& e : a.out(l))
      r.add_transition(static_cast<Location>(block[l]), e.label,
                       static_cast<Location>(block[e.target]));
  }
  return merge_accepting(trim(r));
}

std::optional<Trace> shortest_accepted_trace(const Pcfa& input) {
  Pcfa a = determinize(input);
  std::size_t n = a.num_locations();
  const std::size_t inf = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dist(n, inf);
  std::vector<std::vector<Location>> preds(n);
  for (Location l = 0; l < n; ++l)
    for (const auto& e : a.out(l)) preds[e.target].push_back(l);
  std::deque<Location> queue;
  for (Location l = 0; l < n; ++l)
    if (a.is_accepting(l)) {
      dist[l] = 0;
      queue.push_back(l);
    }
  while (!queue.empty()) {
    Location l = queue.front();
    queue.pop_front();
    for (auto p : preds[l])
      if (dist[p] == inf) {
        dist[p] = dist[l] + 1;
        queue.push_back(p);
      }
  }
  if (dist[a.initial()] == inf) return std::nullopt;
  Trace t;
  Location cur = a.initial();
  while (dist[cur] != 0) {
    std::optional<Edge> best;
    for (const auto& e : a.out(cur))
      if (dist[e.target] + 1 == dist[cur] && (!best || e.label < best->label)) best = e;
    t.push_back(best->label);
    cur = best->target;
  }
  return t;
}

bool is_cfmdp(const Pcfa& a) {
  if (!a.is_deterministic()) return false;
  for (auto l : a.accepting_locations())
    if (!a.out(l).empty()) return false;
  return true;
}

bool is_normalized(const Pcfa& a) {
  for (Location l = 0; l < a.num_locations(); ++l) {
    std::map<int, std::vector<Location>> left, right;
    for (const auto& e : a.out(l)) {
      if (!e.label.is_pb()) continue;
      (e.label.dir() == Dir::L ? left : right)[e.label.id()].push_back(e.target);
    }
    for (const auto& [id, ts] : left) {
      auto it = right.find(id);
      if (it == right.end()) continue;
      for (auto x : ts)
        for (auto y : it->second)
          if (x == y) return false;
    }
  }
  return true;
}

Pcfa normalize(const Pcfa& a) {
  if (!is_cfmdp(a)) throw std::invalid_argument("normalize: input is not a CFMDP");
  std::vector<std::vector<Edge>> adj;
  std::vector<bool> acc;
  for (Location l = 0; l < a.num_locations(); ++l) {
    adj.push_back(a.out(l));
    acc.push_back(a.is_accepting(l));
  }
  auto fresh = [&] {
    adj.emplace_back();
    acc.push_back(false);
    return static_cast<Location>(adj.size() - 1);
  };
  // Finds an id whose two branches at l share a target; returns (id, target).
  auto shared_pair = [&](Location l, bool self) -> std::optional<std::pair<int, Location>> {
    std::map<int, Location> left;
    for (const auto& e : adj[l])
      if (e.label.is_pb() && e.label.dir() == Dir::L) left[e.label.id()] = e.target;
    for (const auto& e : adj[l]) {
      if (!e.label.is_pb() || e.label.dir() != Dir::R) continue;
      auto it = left.find(e.label.id());
      if (it == left.end() || it->second != e.target) continue;
      if ((e.target == l) == self) return std::make_pair(e.label.id(), e.target);
    }
    return std::nullopt;
  };
  // Case 1: self-loop pairs, via two fresh locations.
  for (Location l = 0; l < adj.size(); ++l) {
    while (auto p = shared_pair(l, true)) {
      int id = p->first;
      Label lb = Label::pb(id, Dir::L), rb = Label::pb(id, Dir::R);
      std::vector<Edge> rest;
      for (const auto& e : adj[l])
        if (!(e.label == lb) && !(e.label == rb)) rest.push_back(e);
      Location l1 = fresh(), l2 = fresh();
      adj[l] = rest;
      adj[l].push_back({lb, l1});
      adj[l].push_back({rb, l2});
      adj[l1] = rest;
      adj[l1].push_back({lb, l});
      adj[l1].push_back({rb, l2});
      adj[l2] = rest;
      adj[l2].push_back({lb, l1});
      adj[l2].push_back({rb, l});
    }
  }
  // Case 2: same non-self target, via duplication of the target.
  std::size_t guard = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (Location l = 0; l < adj.size(); ++l) {
      while (auto p = shared_pair(l, false)) {
        if (++guard > 100000) throw std::logic_error("normalize: no fixpoint");
        auto [id, t] = *p;
        Location copy = fresh();
        adj[copy] = adj[t];
        acc[copy] = acc[t];
        for (auto& e : adj[l])
          if (e.label == Label::pb(id, Dir::R)) e.target = copy;
        changed = true;
      }
    }
  }
  Pcfa r(adj.size());
  r.set_initial(a.initial());
  for (Location l = 0; l < adj.size(); ++l) {
    if (acc[l]) r.set_accepting(l);
    for (const auto& e : adj[l]) r.add_transition(l, e.label, e.target);
  }
  return trim(r);
}

std::vector<Trace> enumerate_traces(const Pcfa& input, std::size_t max_len, std::size_t limit) {
  Pcfa a = determinize(input);
  std::vector<Trace> out;
  std::vector<std::pair<Trace, Location>> level{{{}, a.initial()}};
  for (std::size_t len = 0; len <= max_len && !level.empty(); ++len) {
    for (const auto& [t, l] : level) {
      if (a.is_accepting(l)) {
        out.push_back(t);
        if (out.size() >= limit) return out;
      }
    }
    if (len == max_len) break;
    std::vector<std::pair<Trace, Location>> next;
    for (const auto& [t, l] : level)
      for (const auto& e : sorted_edges(a, l)) {
        Trace u = t;
        u.push_back(e.label);
        next.emplace_back(std::move(u), e.target);
      }
    level = std::move(next);
  }
  return out;
}

bool bounded_language_equal(const Pcfa& x, const Pcfa& y, std::size_t depth) {
  Pcfa a = determinize(x), b = determinize(y);
  const Location dead = std::numeric_limits<Location>::max();
  using P = std::pair<Location, Location>;
  std::set<P> seen{{a.initial(), b.initial()}};
  std::vector<P> frontier{{a.initial(), b.initial()}};
  for (std::size_t d = 0; d <= depth && !frontier.empty(); ++d) {
    std::vector<P> next;
    for (auto [p, q] : frontier) {
      bool ap = p != dead && a.is_accepting(p), bq = q != dead && b.is_accepting(q);
      if (ap != bq) return false;
      if (d == depth) continue;
      std::map<Label, P> moves;
      if (p != dead)
        for (const auto& e : a.out(p)) moves.emplace(e.label, P{e.target, dead});
      if (q != dead)
        for (const auto& e : b.out(q)) {
          auto it = moves.find(e.label);
          if (it == moves.end())
            moves.emplace(e.label, P{dead, e.target});
          else
            it->second.second = e.target;
        }
      for (const auto& [label, pq] : moves)
        if (seen.insert(pq).second) next.push_back(pq);
    }
    frontier = std::move(next);
  }
  return true;
}

}  // namespace pta
