#include "pta/interpolation.hpp"

#include <map>

namespace pta {

namespace {

// x = t with a unit coefficient on x; returns t.
std::optional<LinearTerm> defining_equality(const Formula& f, const std::string& x) {
  if (f.kind() != Formula::Kind::Atom || f.rel() != Rel::Eq) return std::nullopt;
  std::int64_t c = f.term().coefficient(x);
  if (c != 1 && c != -1) return std::nullopt;
  LinearTerm rest = f.term() - LinearTerm::variable(x, c);
  return rest.scaled(-c);
}

}  // namespace

std::vector<Formula> sp_approx(const std::vector<Formula>& pre, const Label& l) {
  std::vector<Formula> out;
  switch (l.kind()) {
    case LabelKind::Assume:
      out = pre;
      for (const auto& c : l.cond().conjuncts()) out.push_back(c);
      if (l.cond().is_false()) out.push_back(Formula::make_false());
      return out;
    case LabelKind::Assign: break;
    default: return pre;
  }
  const std::string& x = l.var();
  if (!l.is_bool_assign()) {
    const LinearTerm& e = l.int_rhs();
    std::int64_t a = e.coefficient(x);
    if (a == 1 || a == -1) {
      // x' = a*x + r  =>  x = a*(x' - r)
      LinearTerm r = e - LinearTerm::variable(x, a);
      LinearTerm old = (LinearTerm::variable(x) - r).scaled(a);
      for (const auto& c : pre) out.push_back(c.substitute(x, old));
      return out;
    }
    std::optional<LinearTerm> old;
    std::size_t def = pre.size();
    for (std::size_t i = 0; i < pre.size() && !old; ++i)
      if ((old = defining_equality(pre[i], x))) def = i;
    for (std::size_t i = 0; i < pre.size(); ++i) {
      if (i == def) continue;
      if (!pre[i].mentions(x))
        out.push_back(pre[i]);
      else if (old)
        out.push_back(pre[i].substitute(x, *old));
    }
    if (a == 0)
      out.push_back(Formula::compare(LinearTerm::variable(x), CmpOp::Eq, e));
    else if (old)
      out.push_back(Formula::compare(LinearTerm::variable(x), CmpOp::Eq, e.substitute(x, *old)));
    return out;
  }
  Formula f = l.bool_rhs();
  std::optional<bool> known;
  for (const auto& c : pre) {
    if (c.kind() == Formula::Kind::BoolVar && c.var() == x) known = true;
    if (c.kind() == Formula::Kind::NotVar && c.var() == x) known = false;
  }
  for (const auto& c : pre) {
    if (!c.mentions(x))
      out.push_back(c);
    else if (known)
      out.push_back(c.substitute_bool(x, Formula::constant(*known)));
  }
  if (known) f = f.substitute_bool(x, Formula::constant(*known));
  if (!f.mentions(x)) out.push_back(Formula::iff(Formula::bool_var(x), f));
  return out;
}

std::vector<Formula> fallback_interpolants(const Formula& prefix, const Trace& labels,
                                           const Formula& suffix, Solver& solver) {
  std::size_t n = labels.size();
  // wp[k] = wp_demonic(s(k+1)..sn, !suffix)
  std::vector<Formula> wp(n + 1);
  wp[n] = !suffix;
  for (std::size_t k = n; k-- > 0;) wp[k] = solver.simplify(wp_demonic(labels[k], wp[k + 1]));
  std::vector<Formula> chain;
  std::vector<Formula> cur = prefix.conjuncts();
  for (std::size_t k = 1; k < n; ++k) {
    std::vector<Formula> s = sp_approx(cur, labels[k - 1]);
    Formula sf = solver.simplify(Formula::conjunction(s));
    Formula ik;
    if (sf.is_false()) {
      ik = sf;
    } else if (solver.entails(sf, wp[k])) {
      std::vector<Formula> keep = sf.conjuncts();
      for (std::size_t i = 0; i < keep.size();) {
        std::vector<Formula> without = keep;
        without.erase(without.begin() + static_cast<std::ptrdiff_t>(i));
        if (solver.entails(Formula::conjunction(without), wp[k]))
          keep = std::move(without);
        else
          ++i;
      }
      // Equalities may weaken to one-sided bounds.
      for (auto& c : keep) {
        if (c.kind() != Formula::Kind::Atom || c.rel() != Rel::Eq) continue;
        for (const Formula& weaker : {Formula::atom(c.term(), Rel::Le),
                                      Formula::atom(-c.term(), Rel::Le)}) {
          Formula saved = c;
          c = weaker;
          if (solver.entails(Formula::conjunction(keep), wp[k])) break;
          c = saved;
        }
      }
      ik = Formula::conjunction(keep);
    } else {
      ik = wp[k];
    }
    chain.push_back(ik);
    cur = ik.conjuncts();
    if (ik.is_false()) cur = {ik};
  }
  return chain;
}

std::optional<std::vector<Formula>> backend_interpolants(const Formula& prefix, const Trace& labels,
                                                         const Formula& suffix, Solver& solver) {
  if (!solver.backend().supports_interpolation()) return std::nullopt;
  // SSA encoding: variable x at version v is named x@v.
  std::map<std::string, int> version;
  SortMap sorts;
  prefix.collect_sorts(sorts);
  suffix.collect_sorts(sorts);
  for (const auto& l : labels) {
    if (l.kind() == LabelKind::Assign) {
      sorts[l.var()] = l.is_bool_assign() ? Sort::Bool : Sort::Int;
      if (l.is_bool_assign())
        l.bool_rhs().collect_sorts(sorts);
      else
        for (const auto& [v, c] : l.int_rhs().coefficients()) sorts[v] = Sort::Int;
    }
    if (l.kind() == LabelKind::Assume) l.cond().collect_sorts(sorts);
  }
  for (const auto& [v, s] : sorts) version[v] = 0;
  auto rename = [&](Formula f, bool to_ssa) {
    for (const auto& [v, s] : sorts) {
      std::string from = to_ssa ? v : v + "@" + std::to_string(version[v]);
      std::string to = to_ssa ? v + "@" + std::to_string(version[v]) : v;
      if (s == Sort::Int)
        f = f.substitute(from, LinearTerm::variable(to));
      else
        f = f.substitute_bool(from, Formula::bool_var(to));
    }
    return f;
  };
  auto rename_term = [&](const LinearTerm& t) {
    LinearTerm r = t;
    for (const auto& [v, c] : t.coefficients())
      r = r.substitute(v, LinearTerm::variable(v + "@" + std::to_string(version[v])));
    return r;
  };
  std::vector<Formula> parts{rename(prefix, true)};
  std::vector<std::map<std::string, int>> versions_at;
  for (const auto& l : labels) {
    Formula part = Formula::make_true();
    if (l.kind() == LabelKind::Assume) {
      part = rename(l.cond(), true);
    } else if (l.kind() == LabelKind::Assign) {
      if (l.is_bool_assign()) {
        Formula rhs = rename(l.bool_rhs(), true);
        ++version[l.var()];
        part = Formula::iff(Formula::bool_var(l.var() + "@" + std::to_string(version[l.var()])), rhs);
      } else {
        LinearTerm rhs = rename_term(l.int_rhs());
        ++version[l.var()];
        part = Formula::compare(
            LinearTerm::variable(l.var() + "@" + std::to_string(version[l.var()])), CmpOp::Eq, rhs);
      }
    }
    parts.push_back(part);
    versions_at.push_back(version);
  }
  parts.push_back(rename(suffix, true));
  SortMap ssa_sorts;
  for (const auto& p : parts) p.collect_sorts(ssa_sorts);
  std::optional<std::vector<Formula>> raw;
  try {
    raw = solver.backend().interpolants(parts, ssa_sorts);
  } catch (const std::exception&) {
    return std::nullopt;
  }
  // raw[j] separates parts[0..j] from the rest; we need the cuts after labels 1..n-1.
  if (!raw || raw->size() != parts.size() - 1) return std::nullopt;
  std::vector<Formula> out;
  for (std::size_t k = 1; k < labels.size(); ++k) {
    version = versions_at[k - 1];
    Formula f = rename((*raw)[k], false);
    for (const auto& v : f.variables())
      if (v.find('@') != std::string::npos) return std::nullopt;
    out.push_back(f);
  }
  // Validate the whole chain.
  try {
    Formula prev = prefix;
    for (std::size_t k = 0; k < labels.size(); ++k) {
      Formula next = k + 1 < labels.size() ? out[k] : !suffix;
      if (!hoare_valid(prev, labels[k], next, solver)) return std::nullopt;
      prev = next;
    }
  } catch (const SolverUnknown&) {
    return std::nullopt;
  }
  return out;
}

std::vector<Formula> sequence_interpolants(const Formula& prefix, const Trace& labels,
                                           const Formula& suffix, Solver& solver) {
  if (solver.is_sat(prefix && pre_exists(labels, suffix)))
    throw std::invalid_argument("sequence_interpolants: verification condition is satisfiable");
  if (labels.empty()) return {};
  if (auto b = backend_interpolants(prefix, labels, suffix, solver)) return *b;
  return fallback_interpolants(prefix, labels, suffix, solver);
}

}  // namespace pta
