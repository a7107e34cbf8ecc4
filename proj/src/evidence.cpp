#include "pta/evidence.hpp"

#include "pta/hoare_automata.hpp"
#include "pta/semantics.hpp"

#include <algorithm>
#include <stdexcept>

namespace pta {

bool TraceEnumerator::Later::operator()(const Entry& a, const Entry& b) const {
  if (a.pbs != b.pbs) return a.pbs > b.pbs;
  if (a.trace.size() != b.trace.size()) return a.trace.size() > b.trace.size();
  return trace_less(b.trace, a.trace);
}

TraceEnumerator::TraceEnumerator(Pcfa m) : m_(trim(std::move(m))) {
  if (!is_empty(m_)) queue_.push({0, {}, m_.initial()});
}

std::optional<Trace> TraceEnumerator::next() {
  while (!queue_.empty()) {
    Entry e = queue_.top();
    queue_.pop();
    for (const auto& edge : m_.out(e.loc)) {
      Entry n{e.pbs + (edge.label.is_pb() ? 1 : 0), e.trace, edge.target};
      n.trace.push_back(edge.label);
      queue_.push(std::move(n));
    }
    if (m_.is_accepting(e.loc)) return e.trace;
  }
  return std::nullopt;
}

std::vector<Trace> enumerate_by_weight(const Pcfa& m, std::size_t limit) {
  TraceEnumerator en(m);
  std::vector<Trace> out;
  while (out.size() < limit) {
    auto t = en.next();
    if (!t) break;
    out.push_back(std::move(*t));
  }
  return out;
}

bool compatible(const Formula& total_pre, const Formula& pc, Solver& solver) {
  return solver.is_sat(total_pre && pc);
}

namespace {

Pcfa tidy(const Pcfa& a) {
  Pcfa m = minimize(a);
  if (is_empty(m)) return Pcfa::empty();
  return normalize(merge_accepting(m));
}

Trace strip_guard(const Trace& t, bool split) {
  if (!split || t.empty()) return t;
  return Trace(t.begin() + 1, t.end());
}

std::vector<Trace> strip_guards(const std::vector<Trace>& ts, bool split) {
  std::vector<Trace> out;
  for (const auto& t : ts) out.push_back(strip_guard(t, split));
  return out;
}

}  // namespace

SplitModule::SplitModule() : branches{Branch{}} {}

SplitModule::SplitModule(Pcfa body) : branches{Branch{Formula::make_true(), std::move(body)}} {}

bool SplitModule::is_split() const {
  return branches.size() != 1 || !branches.front().guard.is_true();
}

Pcfa SplitModule::assemble() const {
  if (!is_split()) return branches.front().body;
  Pcfa r(2);
  r.set_accepting(1);
  for (const auto& b : branches) {
    Pcfa t = trim(b.body);
    if (is_empty(t)) continue;
    std::vector<Location> map(t.num_locations());
    for (Location l = 0; l < t.num_locations(); ++l)
      map[l] = t.is_accepting(l) ? 1 : r.add_location();
    for (const auto& tr : t.transitions()) r.add_transition(map[tr.source], tr.label, map[tr.target]);
    r.add_transition(0, Label::assume(b.guard), map[t.initial()]);
  }
  return trim(r);
}

void SplitModule::add(const Pcfa& extra) {
  for (auto& b : branches) b.body = tidy(unite(b.body, extra));
}

void SplitModule::erase(const Pcfa& a) {
  bool split = is_split();
  for (auto& b : branches) {
    Pcfa cut = split ? residual(a, Label::assume(b.guard)) : a;
    b.body = tidy(difference(b.body, cut));
  }
}

SplitModule add_split_condition(const SplitModule& module, const Formula& h,
                                const Specification& spec, const std::vector<Trace>& on_h,
                                const std::vector<Trace>& on_not_h, Solver& solver) {
  if (!solver.is_sat(h)) throw std::invalid_argument("add_split_condition: condition is unsatisfiable");
  if (!solver.is_sat(!h)) throw std::invalid_argument("add_split_condition: condition is valid");
  SplitModule out;
  out.branches.clear();
  for (const auto& b : module.branches) {
    for (bool side : {true, false}) {
      Formula half = side ? h : !h;
      Formula g = b.guard && half;
      if (!solver.is_sat(g)) continue;
      Formula guard = solver.is_sat(b.guard && (side ? !h : h)) ? solver.simplify(g) : b.guard;
      std::vector<Trace> cut;
      for (const auto& w : side ? on_h : on_not_h)
        if (!solver.is_sat(spec.pre && guard && pre_exists(w, !spec.post))) cut.push_back(w);
      Pcfa body = cut.empty() ? b.body : tidy(difference(b.body, trie(cut)));
      out.branches.push_back({guard, std::move(body)});
    }
  }
  return out;
}

std::string ExamineEvent::to_string() const {
  switch (kind) {
    case Kind::Bound: return "bound " + pta::to_string(value);
    case Kind::Mainstream:
      return "mainstream " + pta::to_string(trace) + " " + pta::to_string(value) + " pre " +
             formula.to_string();
    case Kind::Incompatible: return "incompatible " + pta::to_string(trace) + " " + pta::to_string(value);
    case Kind::Fake: return "fake " + pta::to_string(trace) + " " + pta::to_string(value);
    case Kind::Certificate: return "certificate " + pta::to_string(value);
    case Kind::Split: return "split " + formula.to_string();
    case Kind::Counterexample:
      return "counterexample " + pta::to_string(value) + " pre " + formula.to_string();
    case Kind::Verified: return "verified " + pta::to_string(value);
  }
  return "?";
}

namespace {

void note(std::vector<ExamineEvent>* log, ExamineEvent::Kind k, const Trace& t, const Rational& v,
          const Formula& f = Formula::make_true()) {
  if (log) log->push_back({k, t, v, f});
}

}  // namespace

ExamineOutcome examine_round(const Pcfa& m, const Rational& p, const Specification& spec,
                             const Rational& beta, Solver& solver, std::size_t trace_budget,
                             std::vector<ExamineEvent>* log) {
  using K = ExamineEvent::Kind;
  ExamineOutcome out;
  out.upper_bound = p;
  out.mainstream.total_pre = spec.pre;
  TraceEnumerator en(m);
  for (std::size_t n = 0;; ++n) {
    if (n >= trace_budget) {
      out.kind = ExamineOutcome::Kind::Inconclusive;
      out.reason = "trace budget of " + std::to_string(trace_budget) + " exhausted";
      return out;
    }
    auto t = en.next();
    if (!t) break;
    Rational w = weight(*t);
    Formula pc = path_condition(*t, spec);
    if (!solver.is_sat(pc)) {
      out.fakes.push_back(*t);
      out.mass += w;
      note(log, K::Fake, *t, w);
    } else {
      bool ok = compatible(out.mainstream.total_pre, pc, solver);
      if (ok) {
        std::vector<Trace> grown = out.mainstream.traces;
        grown.push_back(*t);
        ok = merge_traces(grown).has_value();
      }
      if (ok) {
        auto& ms = out.mainstream;
        ms.traces.push_back(*t);
        ms.total_pre = solver.simplify(ms.total_pre && pc);
        ms.total_weight += w;
        note(log, K::Mainstream, *t, w, ms.total_pre);
        if (ms.total_weight > beta) {
          out.kind = ExamineOutcome::Kind::CounterexampleFound;
          out.counterexample = Counterexample{ms.traces, ms.total_pre, ms.total_weight};
          note(log, K::Counterexample, {}, ms.total_weight, ms.total_pre);
          return out;
        }
      } else {
        out.incompatibles.push_back(*t);
        out.mass += w;
        note(log, K::Incompatible, *t, w);
      }
    }
    if (out.mass >= p - beta) break;
  }
  out.kind = ExamineOutcome::Kind::Certificate;
  note(log, K::Certificate, {}, out.mass);
  return out;
}

ExamineResult examine(SplitModule& module, const Specification& spec, const Rational& beta,
                      Solver& solver, const ExamineOptions& options,
                      std::vector<ExamineEvent>* log) {
  using K = ExamineEvent::Kind;
  ExamineResult res;
  for (res.rounds = 0; res.rounds < options.max_rounds; ++res.rounds) {
    Pcfa a = module.assemble();
    bool split = module.is_split();
    UpperBound ub = is_empty(a) ? UpperBound{} : mdp_upper_bound(a);
    note(log, K::Bound, {}, ub.value);
    if (ub.value <= beta) {
      note(log, K::Verified, {}, ub.value);
      res.outcome.kind = ExamineOutcome::Kind::Verified;
      res.outcome.upper_bound = ub.value;
      return res;
    }
    Pcfa m = apply_strategy(a, ub.strategy);
    ExamineOutcome o = examine_round(m, ub.value, spec, beta, solver, options.trace_budget, log);
    if (o.kind == ExamineOutcome::Kind::CounterexampleFound) {
      o.counterexample->traces = strip_guards(o.counterexample->traces, split);
      res.outcome = std::move(o);
      return res;
    }
    if (o.kind == ExamineOutcome::Kind::Inconclusive) {
      res.outcome = std::move(o);
      return res;
    }
    bool progress = false;
    std::vector<Label> sigma = a.alphabet();
    for (const auto& f : o.fakes) {
      FloydHoareAutomaton fha = generalize_nonviolating(f, spec, sigma, solver);
      module.erase(fha.base);
      progress = true;
      Trace bare = strip_guard(f, split);
      if (!split || !classify(bare, spec, solver).violating) res.fakes.push_back(bare);
    }
    if (!o.incompatibles.empty()) {
      Formula h = o.mainstream.total_pre;
      module = add_split_condition(module, h, spec, strip_guards(o.incompatibles, split),
                                   strip_guards(o.mainstream.traces, split), solver);
      note(log, K::Split, {}, 0, h);
      progress = true;
    }
    if (!progress) {
      res.outcome.kind = ExamineOutcome::Kind::Inconclusive;
      res.outcome.reason = "examination made no progress";
      return res;
    }
  }
  res.outcome.kind = ExamineOutcome::Kind::Inconclusive;
  res.outcome.reason = "round cap of " + std::to_string(options.max_rounds) + " reached";
  return res;
}

bool validate_counterexample(const Pcfa& program, const Specification& spec, const Rational& beta,
                             const Counterexample& cex, Solver& solver,
                             std::vector<std::string>* why) {
  bool ok = true;
  auto fail = [&](const std::string& r) {
    ok = false;
    if (why) why->push_back(r);
  };
  if (cex.traces.empty()) fail("no traces");
  if (!solver.is_sat(cex.error_pre)) fail("error precondition is unsatisfiable");
  if (!solver.entails(cex.error_pre, spec.pre)) fail("error precondition does not imply the precondition");
  Rational total = 0;
  std::vector<Trace> seen;
  for (const auto& t : cex.traces) {
    if (std::find(seen.begin(), seen.end(), t) != seen.end()) fail("duplicate trace " + to_string(t));
    seen.push_back(t);
    total += weight(t);
    if (!accepts(program, t)) fail("trace not in the program: " + to_string(t));
    if (!solver.entails(cex.error_pre, pre_exists(t, !spec.post)))
      fail("trace does not violate from every error state: " + to_string(t));
  }
  if (!cex.traces.empty() && !merge_traces(cex.traces)) fail("traces are not mergeable");
  if (total != cex.total_vp) fail("total " + to_string(cex.total_vp) + " differs from the weight sum " + to_string(total));
  if (!(total > beta)) fail("total " + to_string(total) + " does not exceed " + to_string(beta));
  return ok;
}

}  // namespace pta
