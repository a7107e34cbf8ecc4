#include "pta/solver.hpp"

#include "pta/lia.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace pta {

namespace {

class BuiltinBackend : public SolverBackend {
 public:
  explicit BuiltinBackend(std::size_t budget) : budget_(budget) {}

  std::string name() const override { return "builtin"; }

  SatResult check(const Formula& f, const SortMap& sorts) override {
    index_.clear();
    for (const auto& [v, s] : sorts)
      if (s == Sort::Int) index_.emplace(v, index_.size());
    std::size_t budget = budget_;
    SatResult r;
    try {
      Assignment a;
      std::optional<State> model = search({f}, {}, a, budget);
      if (!model) {
        r.status = SatStatus::Unsat;
        return r;
      }
      for (const auto& [v, s] : sorts)
        if (!model->count(v)) (*model)[v] = 0;
      if (!f.evaluate(*model)) {
        r.diagnostic = "builtin: model does not satisfy formula";
        return r;
      }
      r.status = SatStatus::Sat;
      r.model = std::move(*model);
    } catch (const lia::BudgetExceeded& e) {
      r.diagnostic = e.what();
    } catch (const ArithmeticOverflow& e) {
      r.diagnostic = std::string("builtin: ") + e.what();
    } catch (const std::logic_error& e) {
      r.diagnostic = std::string("builtin: ") + e.what();
    }
    return r;
  }

 private:
  struct Assignment {
    std::map<std::string, bool> bools;
    std::vector<Formula> atoms;
  };

  lia::Constraint to_constraint(const LinearTerm& t, bool equality) const {
    // t <= 0 becomes -t >= 0
    lia::Constraint c;
    c.coef.assign(index_.size(), 0);
    std::int64_t sign = equality ? 1 : -1;
    for (const auto& [v, k] : t.coefficients()) c.coef[index_.at(v)] = checked_mul(sign, k);
    c.constant = checked_mul(sign, t.constant_part());
    c.equality = equality;
    return c;
  }

  // Integer model of the atoms, splitting violated disequalities lazily.
  std::optional<std::vector<std::int64_t>> theory(const std::vector<Formula>& atoms,
                                                  std::size_t& budget) const {
    std::vector<lia::Constraint> cs;
    std::vector<LinearTerm> diseq;
    for (const auto& a : atoms) {
      if (a.rel() == Rel::Ne)
        diseq.push_back(a.term());
      else
        cs.push_back(to_constraint(a.term(), a.rel() == Rel::Eq));
    }
    auto sol = lia::solve(cs, index_.size(), budget);
    if (!sol) return sol;
    for (const auto& t : diseq) {
      State s;
      for (const auto& [v, i] : index_) s[v] = (*sol)[i];
      if (t.evaluate(s) != 0) continue;
      std::vector<Formula> lo = atoms, hi = atoms;
      auto it = std::find_if(lo.begin(), lo.end(),
                             [&](const Formula& f) { return f.rel() == Rel::Ne && f.term() == t; });
      lo.erase(it);
      hi = lo;
      lo.push_back(Formula::atom(t + LinearTerm::constant(1), Rel::Le));   // t <= -1
      hi.push_back(Formula::atom(-t + LinearTerm::constant(1), Rel::Le));  // t >= 1
      if (auto r = theory(lo, budget)) return r;
      return theory(hi, budget);
    }
    return sol;
  }

  std::optional<State> search(std::vector<Formula> pending, std::vector<Formula> ors,
                              Assignment a, std::size_t& budget) const {
    while (!pending.empty()) {
      Formula f = pending.back();
      pending.pop_back();
      switch (f.kind()) {
        case Formula::Kind::True: break;
        case Formula::Kind::False: return std::nullopt;
        case Formula::Kind::BoolVar:
        case Formula::Kind::NotVar: {
          bool val = f.kind() == Formula::Kind::BoolVar;
          auto [it, fresh] = a.bools.emplace(f.var(), val);
          if (!fresh && it->second != val) return std::nullopt;
          break;
        }
        case Formula::Kind::Atom: a.atoms.push_back(f); break;
        case Formula::Kind::And:
          for (const auto& k : f.children()) pending.push_back(k);
          break;
        case Formula::Kind::Or: ors.push_back(f); break;
      }
    }
    auto sol = theory(a.atoms, budget);
    if (!sol) return std::nullopt;
    // Drop disjunctions already satisfied by the boolean part.
    std::vector<Formula> open;
    for (const auto& o : ors) {
      bool done = false;
      for (const auto& k : o.children()) {
        if ((k.kind() == Formula::Kind::BoolVar || k.kind() == Formula::Kind::NotVar)) {
          auto it = a.bools.find(k.var());
          if (it != a.bools.end() && it->second == (k.kind() == Formula::Kind::BoolVar)) {
            done = true;
            break;
          }
        }
      }
      if (!done) open.push_back(o);
    }
    if (open.empty()) {
      State s;
      for (const auto& [v, i] : index_) s[v] = (*sol)[i];
      for (const auto& [v, b] : a.bools) s[v] = b ? 1 : 0;
      return s;
    }
    std::size_t pick = 0;
    for (std::size_t i = 1; i < open.size(); ++i)
      if (open[i].children().size() < open[pick].children().size()) pick = i;
    Formula chosen = open[pick];
    open.erase(open.begin() + static_cast<std::ptrdiff_t>(pick));
    std::vector<Formula> refuted;
    for (const auto& k : chosen.children()) {
      std::vector<Formula> next = refuted;
      next.push_back(k);
      if (auto s = search(next, open, a, budget)) return s;
      // later branches may assume this disjunct false
      refuted.push_back(!k);
    }
    return std::nullopt;
  }

  std::size_t budget_;
  std::map<std::string, std::size_t> index_;
};

struct Bounds {
  std::optional<std::int64_t> lo, hi;
  std::set<std::int64_t> eq, ne;
};

}  // namespace

std::unique_ptr<SolverBackend> make_builtin_backend(std::size_t step_budget) {
  return std::make_unique<BuiltinBackend>(step_budget);
}

Formula tighten_bounds(const Formula& f) {
  if (f.kind() == Formula::Kind::Or) {
    std::vector<Formula> ks;
    for (const auto& k : f.children()) ks.push_back(tighten_bounds(k));
    return Formula::disjunction(std::move(ks));
  }
  if (f.kind() != Formula::Kind::And) return f;
  std::map<std::string, Bounds> bounds;
  std::vector<Formula> others;
  for (const auto& k : f.children()) {
    if (k.kind() == Formula::Kind::Atom && k.term().coefficients().size() == 1) {
      const auto& [v, c] = *k.term().coefficients().begin();
      std::int64_t k0 = k.term().constant_part();
      Bounds& b = bounds[v];
      switch (k.rel()) {
        case Rel::Le:
          if (c > 0)
            b.hi = b.hi ? std::min(*b.hi, -k0) : -k0;  // v + k0 <= 0
          else
            b.lo = b.lo ? std::max(*b.lo, k0) : k0;  // -v + k0 <= 0
          break;
        case Rel::Eq: b.eq.insert(-k0); break;
        case Rel::Ne: b.ne.insert(-k0); break;
      }
      continue;
    }
    others.push_back(tighten_bounds(k));
  }
  for (auto& [v, b] : bounds) {
    LinearTerm x = LinearTerm::variable(v);
    auto konst = [](std::int64_t c) { return LinearTerm::constant(c); };
    if (!b.eq.empty()) {
      std::int64_t val = *b.eq.begin();
      if (b.eq.size() > 1 || (b.lo && val < *b.lo) || (b.hi && val > *b.hi) || b.ne.count(val))
        return Formula::make_false();
      others.push_back(Formula::compare(x, CmpOp::Eq, konst(val)));
      continue;
    }
    while (b.lo && b.ne.count(*b.lo)) b.lo = *b.lo + 1;
    while (b.hi && b.ne.count(*b.hi)) b.hi = *b.hi - 1;
    if (b.lo && b.hi && *b.lo > *b.hi) return Formula::make_false();
    if (b.lo && b.hi && *b.lo == *b.hi) {
      others.push_back(Formula::compare(x, CmpOp::Eq, konst(*b.lo)));
      continue;
    }
    if (b.lo) others.push_back(Formula::compare(x, CmpOp::Ge, konst(*b.lo)));
    if (b.hi) others.push_back(Formula::compare(x, CmpOp::Le, konst(*b.hi)));
    for (auto n : b.ne)
      if ((!b.lo || n > *b.lo) && (!b.hi || n < *b.hi))
        others.push_back(Formula::compare(x, CmpOp::Ne, konst(n)));
  }
  return Formula::conjunction(std::move(others));
}

Solver::Solver() : Solver(make_builtin_backend()) {}

Solver::Solver(std::unique_ptr<SolverBackend> backend) : backend_(std::move(backend)) {}

SatResult Solver::check_sat(const Formula& f) {
  ++stats_.queries;
  if (f.is_true()) return {SatStatus::Sat, {}, {}};
  if (f.is_false()) return {SatStatus::Unsat, {}, {}};
  auto it = cache_.find(f.to_string());
  if (it != cache_.end()) {
    ++stats_.cache_hits;
    return it->second;
  }
  SortMap sorts;
  f.collect_sorts(sorts);
  SatResult r = backend_->check(f, sorts);
  if (r.status == SatStatus::Sat) {
    for (const auto& [v, s] : sorts)
      if (!r.model.count(v)) r.model[v] = 0;
    if (!f.evaluate(r.model)) {
      r.status = SatStatus::Unknown;
      r.diagnostic = backend_->name() + ": returned model does not satisfy the formula";
    }
  }
  if (r.status == SatStatus::Unknown)
    ++stats_.unknowns;
  else
    cache_.emplace(f.to_string(), r);
  return r;
}

bool Solver::is_sat(const Formula& f) {
  SatResult r = check_sat(f);
  if (r.status == SatStatus::Unknown)
    throw SolverUnknown("solver returned unknown for '" + f.to_string() + "'" +
                        (r.diagnostic.empty() ? "" : ": " + r.diagnostic));
  return r.status == SatStatus::Sat;
}

bool Solver::entails(const Formula& p, const Formula& q) { return !is_sat(p && !q); }

bool Solver::equivalent(const Formula& a, const Formula& b) { return entails(a, b) && entails(b, a); }

Formula Solver::simplify(const Formula& f) {
  auto it = simplify_cache_.find(f.to_string());
  if (it != simplify_cache_.end()) return it->second;
  Formula out = f;
  try {
    out = simplify_rec(tighten_bounds(f));
  } catch (const SolverUnknown&) {
    out = f;
  }
  simplify_cache_.emplace(f.to_string(), out);
  return out;
}

Formula Solver::simplify_rec(const Formula& f) {
  if (!is_sat(f)) return Formula::make_false();
  if (!is_sat(!f)) return Formula::make_true();
  if (f.kind() != Formula::Kind::And && f.kind() != Formula::Kind::Or) return f;
  bool is_and = f.kind() == Formula::Kind::And;
  std::vector<Formula> kids;
  for (const auto& k : f.children()) kids.push_back(simplify_rec(k));
  Formula rebuilt = is_and ? tighten_bounds(Formula::conjunction(kids)) : Formula::disjunction(kids);
  if (rebuilt.kind() != f.kind()) return rebuilt;
  kids = rebuilt.children();
  // Drop members implied by (conjunction) or implying (disjunction) the rest.
  for (std::size_t i = 0; i < kids.size() && kids.size() > 1;) {
    std::vector<Formula> others;
    for (std::size_t j = 0; j < kids.size(); ++j)
      if (j != i) others.push_back(kids[j]);
    bool redundant = is_and ? entails(Formula::conjunction(others), kids[i])
                            : entails(kids[i], Formula::disjunction(others));
    if (redundant)
      kids.erase(kids.begin() + static_cast<std::ptrdiff_t>(i));
    else
      ++i;
  }
  return is_and ? Formula::conjunction(std::move(kids)) : Formula::disjunction(std::move(kids));
}

}  // namespace pta
