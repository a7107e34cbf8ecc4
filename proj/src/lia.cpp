#include "pta/lia.hpp"

#include "pta/formula.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace pta::lia {

namespace {

using Vec = std::vector<std::int64_t>;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

// a mod^ m as in the Omega test: a - m * floor(a/m + 1/2)
std::int64_t mod_hat(std::int64_t a, std::int64_t m) {
  std::int64_t r = a - m * floor_div(a, m);  // in [0, m)
  if (2 * r >= m) r -= m;
  return r;
}

std::int64_t abs64(std::int64_t a) {
  if (a == INT64_MIN) throw ArithmeticOverflow("integer overflow in abs");
  return a < 0 ? -a : a;
}

// Normalizes in place; returns false when a contradiction is detected.
bool normalize(std::vector<Constraint>& cs) {
  std::map<Vec, std::int64_t> ineqs;  // coefficients -> tightest constant
  std::map<Vec, std::int64_t> eqs;
  for (auto& c : cs) {
    std::int64_t g = 0;
    for (auto a : c.coef) g = std::gcd(g, abs64(a));
    if (g == 0) {
      if (c.equality ? c.constant != 0 : c.constant < 0) return false;
      continue;
    }
    if (c.equality) {
      if (c.constant % g != 0) return false;
      std::int64_t sign = 1;
      for (auto a : c.coef)
        if (a != 0) {
          sign = a < 0 ? -1 : 1;
          break;
        }
      for (auto& a : c.coef) a = sign * (a / g);
      c.constant = sign * (c.constant / g);
      auto [it, fresh] = eqs.emplace(c.coef, c.constant);
      if (!fresh && it->second != c.constant) return false;
    } else {
      for (auto& a : c.coef) a /= g;
      c.constant = floor_div(c.constant, g);
      auto [it, fresh] = ineqs.emplace(c.coef, c.constant);
      if (!fresh) it->second = std::min(it->second, c.constant);
    }
  }
  std::vector<Constraint> out;
  for (const auto& [coef, k] : eqs) out.push_back({coef, k, true});
  for (const auto& [coef, k] : ineqs) {
    Vec neg = coef;
    for (auto& a : neg) a = -a;
    auto opp = ineqs.find(neg);
    if (opp != ineqs.end()) {
      // coef.x >= -k and coef.x <= opp->second
      std::int64_t sum = checked_add(k, opp->second);
      if (sum < 0) return false;
      if (sum == 0) {
        if (coef < neg) continue;  // emit the equality once
        std::int64_t sign = 1;
        for (auto a : coef)
          if (a != 0) {
            sign = a < 0 ? -1 : 1;
            break;
          }
        Vec e = coef;
        for (auto& a : e) a *= sign;
        auto [it, fresh] = eqs.emplace(e, sign * k);
        if (!fresh && it->second != sign * k) return false;
        if (fresh) out.push_back({e, sign * k, true});
        continue;
      }
    }
    out.push_back({coef, k, false});
  }
  cs = std::move(out);
  return true;
}

std::int64_t eval_rest(const Constraint& c, const Vec& sol, std::size_t skip) {
  std::int64_t acc = c.constant;
  for (std::size_t i = 0; i < c.coef.size(); ++i)
    if (i != skip && c.coef[i] != 0) acc = checked_add(acc, checked_mul(c.coef[i], sol[i]));
  return acc;
}

// Substitutes x_k := sum(e_i x_i) + ce into c.
Constraint substitute(const Constraint& c, std::size_t k, const Vec& e, std::int64_t ce) {
  Constraint d = c;
  std::int64_t a = c.coef[k];
  if (a == 0) return d;
  d.coef[k] = 0;
  for (std::size_t i = 0; i < e.size(); ++i)
    if (e[i] != 0) d.coef[i] = checked_add(d.coef[i], checked_mul(a, e[i]));
  d.constant = checked_add(d.constant, checked_mul(a, ce));
  return d;
}

std::optional<Vec> solve_rec(std::vector<Constraint> cs, std::size_t n, std::size_t& budget);

std::optional<Vec> eliminate_equality(std::vector<Constraint> cs, std::size_t n,
                                      std::size_t& budget) {
  // Equality with the smallest nonzero coefficient.
  std::size_t best = cs.size(), best_var = 0;
  std::int64_t best_abs = 0;
  for (std::size_t j = 0; j < cs.size(); ++j) {
    if (!cs[j].equality) continue;
    for (std::size_t i = 0; i < n; ++i) {
      std::int64_t a = abs64(cs[j].coef[i]);
      if (a != 0 && (best == cs.size() || a < best_abs)) {
        best = j;
        best_var = i;
        best_abs = a;
      }
    }
  }
  Constraint eq = cs[best];
  std::size_t k = best_var;
  std::int64_t ak = eq.coef[k];
  if (best_abs == 1) {
    Vec e(n, 0);
    for (std::size_t i = 0; i < n; ++i)
      if (i != k) e[i] = checked_mul(-ak, eq.coef[i]);
    std::int64_t ce = checked_mul(-ak, eq.constant);
    std::vector<Constraint> next;
    for (std::size_t j = 0; j < cs.size(); ++j)
      if (j != best) next.push_back(substitute(cs[j], k, e, ce));
    auto sol = solve_rec(std::move(next), n, budget);
    if (sol) {
      std::int64_t v = ce;
      for (std::size_t i = 0; i < n; ++i)
        if (e[i] != 0) v = checked_add(v, checked_mul(e[i], (*sol)[i]));
      (*sol)[k] = v;
    }
    return sol;
  }
  // No unit coefficient: introduce sigma with m*sigma = sum(a_i mod^ m x_i) + (c mod^ m).
  std::int64_t m = checked_add(best_abs, 1);
  for (auto& c : cs) c.coef.push_back(0);
  Constraint extra;
  extra.equality = true;
  extra.coef.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) extra.coef[i] = mod_hat(eq.coef[i], m);
  extra.coef[n] = -m;
  extra.constant = mod_hat(eq.constant, m);
  cs.push_back(extra);
  auto sol = solve_rec(std::move(cs), n + 1, budget);
  if (sol) sol->resize(n);
  return sol;
}

std::int64_t pick_value(const std::vector<Constraint>& lowers, const std::vector<Constraint>& uppers,
                        std::size_t k, const Vec& sol) {
  bool has_lo = false, has_hi = false;
  std::int64_t lo = 0, hi = 0;
  for (const auto& c : lowers) {
    std::int64_t v = ceil_div(-eval_rest(c, sol, k), c.coef[k]);
    lo = has_lo ? std::max(lo, v) : v;
    has_lo = true;
  }
  for (const auto& c : uppers) {
    std::int64_t v = floor_div(eval_rest(c, sol, k), -c.coef[k]);
    hi = has_hi ? std::min(hi, v) : v;
    has_hi = true;
  }
  if (has_lo && has_hi && lo > hi) throw std::logic_error("omega: empty bound interval");
  if (has_lo) return lo;
  if (has_hi) return hi;
  return 0;
}

std::optional<Vec> solve_rec(std::vector<Constraint> cs, std::size_t n, std::size_t& budget) {
  if (budget == 0) throw BudgetExceeded();
  --budget;
  if (!normalize(cs)) return std::nullopt;
  if (cs.empty()) return Vec(n, 0);
  for (const auto& c : cs)
    if (c.equality) return eliminate_equality(std::move(cs), n, budget);

  // Choose the variable to eliminate.
  std::size_t best = n;
  bool best_exact = false;
  std::size_t best_cost = 0;
  bool best_onesided = false;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t lo = 0, hi = 0;
    bool lo_unit = true, hi_unit = true;
    for (const auto& c : cs) {
      if (c.coef[k] > 0) {
        ++lo;
        lo_unit = lo_unit && c.coef[k] == 1;
      } else if (c.coef[k] < 0) {
        ++hi;
        hi_unit = hi_unit && c.coef[k] == -1;
      }
    }
    if (lo + hi == 0) continue;
    bool onesided = lo == 0 || hi == 0;
    bool exact = lo_unit || hi_unit;
    std::size_t cost = lo * hi;
    auto better = [&] {
      if (best == n) return true;
      if (onesided != best_onesided) return onesided;
      if (exact != best_exact) return exact;
      return cost < best_cost;
    };
    if (better()) {
      best = k;
      best_exact = exact;
      best_cost = cost;
      best_onesided = onesided;
    }
  }
  std::size_t k = best;
  std::vector<Constraint> rest, lowers, uppers;
  for (const auto& c : cs) {
    if (c.coef[k] > 0)
      lowers.push_back(c);
    else if (c.coef[k] < 0)
      uppers.push_back(c);
    else
      rest.push_back(c);
  }
  if (lowers.empty() || uppers.empty()) {
    auto sol = solve_rec(rest, n, budget);
    if (sol) (*sol)[k] = pick_value(lowers, uppers, k, *sol);
    return sol;
  }

  bool exact = true;
  auto combine = [&](const Constraint& l, const Constraint& u, bool dark) {
    std::int64_t a = l.coef[k], b = -u.coef[k];
    if (a != 1 && b != 1) exact = false;
    Constraint s;
    s.coef.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i)
      s.coef[i] = checked_add(checked_mul(b, l.coef[i]), checked_mul(a, u.coef[i]));
    s.coef[k] = 0;
    s.constant = checked_add(checked_mul(b, l.constant), checked_mul(a, u.constant));
    if (dark) s.constant = checked_add(s.constant, -checked_mul(a - 1, b - 1));
    return s;
  };
  std::vector<Constraint> real = rest, dark = rest;
  for (const auto& l : lowers)
    for (const auto& u : uppers) {
      real.push_back(combine(l, u, false));
      dark.push_back(combine(l, u, true));
    }
  if (exact) {
    auto sol = solve_rec(std::move(real), n, budget);
    if (sol) (*sol)[k] = pick_value(lowers, uppers, k, *sol);
    return sol;
  }
  if (!solve_rec(std::move(real), n, budget)) return std::nullopt;
  if (auto sol = solve_rec(std::move(dark), n, budget)) {
    (*sol)[k] = pick_value(lowers, uppers, k, *sol);
    return sol;
  }
  // Splinters: the solution lies close to some lower bound.
  std::int64_t m = 0;
  for (const auto& u : uppers) m = std::max(m, -u.coef[k]);
  for (const auto& l : lowers) {
    std::int64_t a = l.coef[k];
    std::int64_t top = floor_div(checked_add(checked_mul(m, a), -checked_add(a, m)), m);
    for (std::int64_t j = 0; j <= top; ++j) {
      std::vector<Constraint> split = cs;
      Constraint e = l;
      e.equality = true;
      e.constant = checked_add(e.constant, -j);
      split.push_back(e);
      if (auto sol = solve_rec(std::move(split), n, budget)) return sol;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::vector<std::int64_t>> solve(std::vector<Constraint> constraints,
                                               std::size_t num_vars, std::size_t& budget) {
  for (auto& c : constraints) c.coef.resize(num_vars, 0);
  auto sol = solve_rec(constraints, num_vars, budget);
  if (sol) {
    for (const auto& c : constraints) {
      std::int64_t v = eval_rest(c, *sol, num_vars);
      if (c.equality ? v != 0 : v < 0) throw std::logic_error("omega: model check failed");
    }
  }
  return sol;
}

}  // namespace pta::lia
