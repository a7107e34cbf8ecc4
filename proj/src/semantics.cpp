#include "pta/semantics.hpp"

namespace pta {

std::size_t pb_count(const Trace& t) {
  std::size_t n = 0;
  for (const auto& l : t)
    if (l.is_pb()) ++n;
  return n;
}

Rational weight(const Trace& t) {
  BigInt den = 1;
  den <<= pb_count(t);
  return Rational(BigInt(1), den);
}

std::optional<State> interpret(const Label& l, const State& s) {
  switch (l.kind()) {
    case LabelKind::Assign: {
      State r = s;
      r[l.var()] = l.is_bool_assign() ? (l.bool_rhs().evaluate(s) ? 1 : 0) : l.int_rhs().evaluate(s);
      return r;
    }
    case LabelKind::Assume:
      if (!l.cond().evaluate(s)) return std::nullopt;
      return s;
    default: return s;
  }
}

std::optional<State> interpret_trace(const Trace& t, State s) {
  for (const auto& l : t) {
    auto next = interpret(l, s);
    if (!next) return std::nullopt;
    s = std::move(*next);
  }
  return s;
}

namespace {

Formula substitute_assign(const Label& l, const Formula& post) {
  if (l.is_bool_assign()) return post.substitute_bool(l.var(), l.bool_rhs());
  return post.substitute(l.var(), l.int_rhs());
}

}  // namespace

Formula pre_exists(const Label& l, const Formula& post) {
  switch (l.kind()) {
    case LabelKind::Assign: return substitute_assign(l, post);
    case LabelKind::Assume: return l.cond() && post;
    default: return post;
  }
}

Formula pre_exists(const Trace& t, const Formula& post) {
  Formula f = post;
  for (auto it = t.rbegin(); it != t.rend(); ++it) f = pre_exists(*it, f);
  return f;
}

Formula wp_demonic(const Label& l, const Formula& post) {
  switch (l.kind()) {
    case LabelKind::Assign: return substitute_assign(l, post);
    case LabelKind::Assume: return Formula::implies(l.cond(), post);
    default: return post;
  }
}

Formula wp_demonic(const Trace& t, const Formula& post) {
  Formula f = post;
  for (auto it = t.rbegin(); it != t.rend(); ++it) f = wp_demonic(*it, f);
  return f;
}

Formula path_condition(const Trace& t, const Specification& spec) {
  return spec.pre && pre_exists(t, !spec.post);
}

TraceClass classify(const Trace& t, const Specification& spec, Solver& solver) {
  Formula pc = path_condition(t, spec);
  if (!solver.is_sat(pc)) return {false, Formula::make_false()};
  return {true, solver.simplify(pc)};
}

bool hoare_valid(const Formula& p, const Label& l, const Formula& q, Solver& solver) {
  if (p.is_false() || q.is_true()) return true;
  return !solver.is_sat(p && pre_exists(l, !q));
}

}  // namespace pta
