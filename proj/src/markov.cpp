#include "pta/markov.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>
#include <tuple>

namespace pta {

namespace {

Label representative(const Action& a) {
  if (const int* id = std::get_if<int>(&a)) return Label::pb(*id, Dir::L);
  return std::get<Label>(a);
}

bool same_action(const Action& a, const Action& b) {
  if (a.index() != b.index()) return false;
  if (a.index() == 0) return std::get<int>(a) == std::get<int>(b);
  return std::get<Label>(a) == std::get<Label>(b);
}

}  // namespace

std::string to_string(const Action& a) {
  if (const int* id = std::get_if<int>(&a)) return "coin " + std::to_string(*id);
  return std::get<Label>(a).to_string();
}

std::vector<Action> actions_at(const Pcfa& a, Location l) {
  std::set<int> coins;
  std::set<Label> labels;
  for (const auto& e : a.out(l)) {
    if (e.label.is_pb())
      coins.insert(e.label.id());
    else
      labels.insert(e.label);
  }
  std::vector<Action> out;
  for (int c : coins) out.emplace_back(c);
  for (const auto& lab : labels) out.emplace_back(lab);
  std::sort(out.begin(), out.end(), [](const Action& x, const Action& y) {
    return representative(x) < representative(y);
  });
  return out;
}

std::optional<std::pair<Action, std::size_t>> Strategy::at(Location l, std::size_t q) const {
  auto it = delta.find({l, q});
  if (it == delta.end()) return std::nullopt;
  return it->second;
}

bool Strategy::defined(Location l, std::size_t q) const {
  return delta.count({l, q}) > 0 || finals.count({l, q}) > 0;
}

bool is_cfmc(const Pcfa& a) {
  if (!is_cfmdp(a)) return false;
  for (Location l = 0; l < a.num_locations(); ++l)
    if (actions_at(a, l).size() > 1) return false;
  return true;
}

Pcfa apply_strategy(const Pcfa& a, const Strategy& s) {
  if (!is_cfmdp(a)) throw std::invalid_argument("apply_strategy: not a CFMDP");
  Pcfa r(2);
  r.set_accepting(1);
  std::map<std::pair<Location, std::size_t>, Location> ids;
  std::deque<std::pair<Location, std::size_t>> work;
  auto id = [&](Location l, std::size_t q) -> Location {
    if (a.is_accepting(l)) return 1;
    auto [it, fresh] = ids.emplace(std::make_pair(l, q), 0);
    if (fresh) {
      it->second = r.add_location();
      work.emplace_back(l, q);
    }
    return it->second;
  };
  r.set_initial(id(a.initial(), s.initial));
  while (!work.empty()) {
    auto [l, q] = work.front();
    work.pop_front();
    Location src = ids.at({l, q});
    auto d = s.at(l, q);
    if (!d) continue;
    const auto& [act, q2] = *d;
    if (const Label* lab = std::get_if<Label>(&act)) {
      if (lab->is_pb()) throw std::invalid_argument("apply_strategy: Pb label used as an action");
      auto t = a.step(l, *lab);
      if (!t)
        throw std::invalid_argument("apply_strategy: action " + lab->to_string() +
                                    " unavailable at location " + std::to_string(l));
      r.add_transition(src, *lab, id(*t, q2));
      continue;
    }
    int coin = std::get<int>(act);
    Label ll = Label::pb(coin, Dir::L), lr = Label::pb(coin, Dir::R);
    auto tl = a.step(l, ll), tr = a.step(l, lr);
    if (!tl && !tr)
      throw std::invalid_argument("apply_strategy: coin " + std::to_string(coin) +
                                  " unavailable at location " + std::to_string(l));
    bool dl = tl && s.defined(*tl, q2), dr = tr && s.defined(*tr, q2);
    if (tl && (dl || !dr)) r.add_transition(src, ll, id(*tl, q2));
    if (tr && (dr || !dl)) r.add_transition(src, lr, id(*tr, q2));
  }
  return trim(r);
}

namespace {

constexpr long kBottom = -1;

// Internal states of the sublanguage strategy: a plain location of m, or a
// triple (T, l1, l2) remembering both branches of a pending coin, where T is
// the L-target of that coin in a (or bottom).
class SublanguageBuilder {
 public:
  SublanguageBuilder(const Pcfa& a, const Pcfa& m) : a_(a), m_(m) {}

  Strategy build() {
    Strategy s;
    s.initial = plain(m_.initial());
    std::vector<Location> a_locs;
    for (Location l = 0; l < a_.num_locations(); ++l) a_locs.push_back(l);
    for (std::size_t q = 0; q < keys_.size(); ++q) {
      for (Location la : a_locs) {
        auto resolved = resolve(la, q);
        if (!resolved) continue;
        if (a_.is_accepting(la)) {
          if (m_.is_accepting(*resolved)) s.finals.insert({la, q});
          continue;
        }
        if (auto d = delta_minus(la, *resolved)) s.delta[{la, q}] = *d;
      }
    }
    s.num_states = keys_.size();
    return s;
  }

 private:
  using Key = std::tuple<int, long, long, long>;

  std::size_t intern(const Key& k) {
    auto [it, fresh] = index_.emplace(k, keys_.size());
    if (fresh) keys_.push_back(k);
    return it->second;
  }
  std::size_t plain(Location lm) { return intern({0, static_cast<long>(lm), 0, 0}); }
  std::size_t dual(long t, long l1, long l2) { return intern({1, t, l1, l2}); }

  // The location of m that state q stands for when a is at la.
  std::optional<Location> resolve(Location la, std::size_t q) const {
    const auto& [kind, x, l1, l2] = keys_[q];
    if (kind == 0) return static_cast<Location>(x);
    long pick = static_cast<long>(la) == x ? l1 : l2;
    if (pick == kBottom) return std::nullopt;
    return static_cast<Location>(pick);
  }

  std::optional<std::pair<Action, std::size_t>> delta_minus(Location la, Location lm) {
    const auto& out = m_.out(lm);
    if (out.empty()) return std::nullopt;
    const Label& first = out.front().label;
    if (!first.is_pb()) return std::make_pair(Action(first), plain(out.front().target));
    int coin = first.id();
    long lt = kBottom, rt = kBottom;
    for (const auto& e : out) {
      if (!e.label.is_pb() || e.label.id() != coin)
        throw std::invalid_argument("strategy_for_sublanguage: m is not a CFMC");
      (e.label.dir() == Dir::L ? lt : rt) = e.target;
    }
    auto ta = a_.step(la, Label::pb(coin, Dir::L));
    long t = ta ? static_cast<long>(*ta) : kBottom;
    return std::make_pair(Action(coin), dual(t, lt, rt));
  }

  const Pcfa& a_;
  const Pcfa& m_;
  std::map<Key, std::size_t> index_;
  std::vector<Key> keys_;
};

}  // namespace

Strategy strategy_for_sublanguage(const Pcfa& a, const Pcfa& m) {
  if (!is_cfmdp(a) || !is_normalized(a))
    throw std::invalid_argument("strategy_for_sublanguage: a must be a normalized CFMDP");
  Pcfa mt = trim(m);
  if (!is_cfmc(mt)) throw std::invalid_argument("strategy_for_sublanguage: m is not a CFMC");
  if (!is_empty(difference(mt, a)))
    throw std::invalid_argument("strategy_for_sublanguage: L(m) is not a subset of L(a)");
  return SublanguageBuilder(a, mt).build();
}

namespace {

struct Outcome {
  std::optional<Location> target;  // nullopt: the branch is missing
  Rational p;
};

std::vector<Outcome> outcomes(const Pcfa& a, Location l, const Action& act) {
  if (const Label* lab = std::get_if<Label>(&act)) return {{a.step(l, *lab), Rational(1)}};
  int coin = std::get<int>(act);
  return {{a.step(l, Label::pb(coin, Dir::L)), Rational(1, 2)},
          {a.step(l, Label::pb(coin, Dir::R)), Rational(1, 2)}};
}

// Solves the linear system of the Markov chain induced by `policy`.
std::vector<Rational> evaluate(const Pcfa& a, const std::vector<std::optional<Action>>& policy) {
  std::size_t n = a.num_locations();
  // Locations that reach acceptance under the policy.
  std::vector<std::vector<Location>> pred(n);
  for (Location l = 0; l < n; ++l) {
    if (!policy[l]) continue;
    for (const auto& o : outcomes(a, l, *policy[l]))
      if (o.target) pred[*o.target].push_back(l);
  }
  std::vector<bool> live(n, false);
  std::deque<Location> q;
  for (Location l = 0; l < n; ++l)
    if (a.is_accepting(l)) {
      live[l] = true;
      q.push_back(l);
    }
  while (!q.empty()) {
    Location l = q.front();
    q.pop_front();
    for (Location p : pred[l])
      if (!live[p]) {
        live[p] = true;
        q.push_back(p);
      }
  }
  std::vector<Location> vars;
  std::vector<long> col(n, -1);
  for (Location l = 0; l < n; ++l)
    if (live[l] && !a.is_accepting(l)) {
      col[l] = static_cast<long>(vars.size());
      vars.push_back(l);
    }
  std::size_t k = vars.size();
  std::vector<std::vector<Rational>> m(k, std::vector<Rational>(k + 1));
  for (std::size_t i = 0; i < k; ++i) {
    Location l = vars[i];
    m[i][i] = 1;
    for (const auto& o : outcomes(a, l, *policy[l])) {
      if (!o.target) continue;
      if (a.is_accepting(*o.target))
        m[i][k] += o.p;
      else if (col[*o.target] >= 0)
        m[i][static_cast<std::size_t>(col[*o.target])] -= o.p;
    }
  }
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t piv = c;
    while (piv < k && m[piv][c] == 0) ++piv;
    if (piv == k) throw std::logic_error("mdp_upper_bound: singular system");
    std::swap(m[c], m[piv]);
    Rational inv = 1 / m[c][c];
    for (std::size_t j = c; j <= k; ++j) m[c][j] *= inv;
    for (std::size_t r = 0; r < k; ++r) {
      if (r == c || m[r][c] == 0) continue;
      Rational f = m[r][c];
      for (std::size_t j = c; j <= k; ++j) m[r][j] -= f * m[c][j];
    }
  }
  std::vector<Rational> v(n, Rational(0));
  for (Location l = 0; l < n; ++l)
    if (a.is_accepting(l)) v[l] = 1;
  for (std::size_t i = 0; i < k; ++i) v[vars[i]] = m[i][k];
  return v;
}

Rational q_value(const Pcfa& a, Location l, const Action& act, const std::vector<Rational>& v) {
  Rational s = 0;
  for (const auto& o : outcomes(a, l, act))
    if (o.target) s += o.p * v[*o.target];
  return s;
}

}  // namespace

UpperBound mdp_upper_bound(const Pcfa& a) {
  std::size_t n = a.num_locations();
  std::vector<std::vector<Action>> acts(n);
  for (Location l = 0; l < n; ++l)
    if (!a.is_accepting(l)) acts[l] = actions_at(a, l);

  // Attractor: rank 0 at acceptance, each further rank picks the first
  // action with a successor of lower rank. Locations never ranked have value 0.
  std::vector<long> rank(n, -1);
  std::vector<std::optional<Action>> policy(n);
  for (Location l = 0; l < n; ++l)
    if (a.is_accepting(l)) rank[l] = 0;
  for (long r = 1;; ++r) {
    std::vector<std::pair<Location, Action>> next;
    for (Location l = 0; l < n; ++l) {
      if (rank[l] >= 0) continue;
      for (const auto& act : acts[l]) {
        bool hit = false;
        for (const auto& o : outcomes(a, l, act))
          if (o.target && rank[*o.target] >= 0) hit = true;
        if (hit) {
          next.emplace_back(l, act);
          break;
        }
      }
    }
    if (next.empty()) break;
    for (const auto& [l, act] : next) {
      rank[l] = r;
      policy[l] = act;
    }
  }

  std::vector<Rational> v = evaluate(a, policy);
  for (;;) {
    bool changed = false;
    for (Location l = 0; l < n; ++l) {
      if (rank[l] <= 0) continue;
      std::optional<Action> best;
      Rational best_v = v[l];
      for (const auto& act : acts[l]) {
        Rational qv = q_value(a, l, act, v);
        if (qv > best_v) {
          best_v = qv;
          best = act;
        }
      }
      if (best && !same_action(*best, *policy[l])) {
        policy[l] = best;
        changed = true;
      }
    }
    if (!changed) break;
    v = evaluate(a, policy);
  }

  UpperBound ub;
  ub.value = v[a.initial()];
  ub.per_location = v;
  for (Location l = 0; l < n; ++l) {
    if (a.is_accepting(l))
      ub.strategy.finals.insert({l, 0});
    else if (v[l] > 0 && policy[l])
      ub.strategy.delta[{l, 0}] = {*policy[l], 0};
  }
  return ub;
}

Pcfa reason_cfmc(const Pcfa& a) {
  UpperBound ub = mdp_upper_bound(a);
  if (ub.value == 0) return Pcfa::empty();
  return apply_strategy(a, ub.strategy);
}

std::optional<Pcfa> merge_traces(const std::vector<Trace>& traces) {
  if (traces.empty()) return Pcfa::empty();
  Pcfa t = trie(traces);
  for (Location l = 0; l < t.num_locations(); ++l) {
    if (t.is_accepting(l) && !t.out(l).empty()) return std::nullopt;
    const auto& out = t.out(l);
    if (out.size() <= 1) continue;
    if (out.size() != 2) return std::nullopt;
    const Label& x = out[0].label;
    const Label& y = out[1].label;
    if (!x.is_pb() || !y.is_pb() || x.id() != y.id() || x.dir() == y.dir()) return std::nullopt;
  }
  return merge_accepting(t);
}

}  // namespace pta
