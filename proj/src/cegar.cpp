#include "pta/cegar.hpp"

#include "pta/semantics.hpp"

#include <algorithm>

namespace pta {

std::string to_string(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::Sat: return "SAT";
    case Verdict::Kind::Unsat: return "UNSAT";
    case Verdict::Kind::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

namespace {

Pcfa tidy(const Pcfa& a) {
  Pcfa m = minimize(a);
  if (is_empty(m)) return Pcfa::empty();
  return normalize(merge_accepting(m));
}

void say(VerifyLog* log, const std::string& s) {
  if (log) log->push_back(s);
}

// Certified automata collected by the right loop.
struct Certified {
  std::vector<FloydHoareAutomaton> members;
  Pcfa cover = Pcfa::empty();

  void add(FloydHoareAutomaton f) {
    cover = minimize(unite(cover, f.base));
    members.push_back(std::move(f));
  }
};

Verdict inconclusive(std::string why, std::size_t iterations, std::size_t traces) {
  Verdict v;
  v.kind = Verdict::Kind::Inconclusive;
  v.reason = std::move(why);
  v.iterations = iterations;
  v.traces = traces;
  return v;
}

Verdict sat(const Rational& bound, std::size_t iterations, std::size_t traces) {
  Verdict v;
  v.kind = Verdict::Kind::Sat;
  v.upper_bound = bound;
  v.iterations = iterations;
  v.traces = traces;
  return v;
}

Verdict unsat(Counterexample cex, const Pcfa& program, const Specification& spec,
              const Rational& beta, Solver& solver, std::size_t iterations, std::size_t traces) {
  std::vector<std::string> why;
  if (!validate_counterexample(program, spec, beta, cex, solver, &why))
    return inconclusive("counterexample failed validation: " + why.front(), iterations, traces);
  Verdict v;
  v.kind = Verdict::Kind::Unsat;
  v.counterexample = std::move(cex);
  v.iterations = iterations;
  v.traces = traces;
  return v;
}

std::size_t events_traces(const std::vector<ExamineEvent>& log) {
  std::size_t n = 0;
  for (const auto& e : log)
    if (e.kind == ExamineEvent::Kind::Mainstream || e.kind == ExamineEvent::Kind::Incompatible ||
        e.kind == ExamineEvent::Kind::Fake)
      ++n;
  return n;
}

}  // namespace

Verdict verify(const Pcfa& program, const Specification& spec, const Rational& beta, Solver& solver,
               const VerifyOptions& options, VerifyLog* log) {
  std::size_t iterations = 0, traces = 0;
  try {
    UpperBound whole = mdp_upper_bound(program);
    if (whole.value <= beta) {
      say(log, "program bound " + to_string(whole.value) + " within beta");
      return sat(whole.value, 0, 0);
    }
    std::vector<Label> sigma = program.alphabet();
    Certified q;
    Pcfa a_cover = Pcfa::empty();
    SplitModule module;
    Rational bound = 0;
    while (true) {
      Pcfa residue = difference(difference(program, q.cover), a_cover);
      if (is_empty(residue)) {
        say(log, "covered; bound " + to_string(bound));
        return sat(bound, iterations, traces);
      }
      if (iterations >= options.max_iterations)
        return inconclusive("iteration cap of " + std::to_string(options.max_iterations) + " reached",
                            iterations, traces);
      Trace t = *shortest_accepted_trace(residue);
      ++iterations;
      ++traces;
      TraceClass c = classify(t, spec, solver);
      if (!c.violating) {
        say(log, "non-violating " + to_string(t));
        q.add(generalize_nonviolating(t, spec, sigma, solver));
        continue;
      }
      Rational w = weight(t);
      say(log, "violating " + to_string(t) + " weight " + to_string(w));
      if (w > beta)
        return unsat(Counterexample{{t}, c.error_pre, w}, program, spec, beta, solver, iterations,
                     traces);
      FloydHoareAutomaton gen = generalize_violating(t, spec, sigma, solver);
      Pcfa inside = intersect(gen.base, program);
      a_cover = minimize(unite(a_cover, inside));
      module.add(difference(inside, q.cover));
      std::vector<ExamineEvent> events;
      ExamineResult ex = examine(module, spec, beta, solver, options.examine, &events);
      traces += events_traces(events);
      for (const auto& e : events) say(log, "  " + e.to_string());
      for (const auto& f : ex.fakes) q.add(generalize_nonviolating(f, spec, sigma, solver));
      switch (ex.outcome.kind) {
        case ExamineOutcome::Kind::Verified: bound = ex.outcome.upper_bound; break;
        case ExamineOutcome::Kind::CounterexampleFound:
          return unsat(*ex.outcome.counterexample, program, spec, beta, solver, iterations, traces);
        default: return inconclusive(ex.outcome.reason, iterations, traces);
      }
    }
  } catch (const SolverUnknown& e) {
    return inconclusive(std::string("solver: ") + e.what(), iterations, traces);
  }
}

namespace {

bool mergeable_pair(const Trace& a, const Trace& b) {
  std::size_t k = 0;
  while (k < a.size() && k < b.size() && a[k] == b[k]) ++k;
  if (k == a.size() || k == b.size()) return false;
  return a[k].is_pb() && b[k].is_pb() && a[k].id() == b[k].id() && a[k].dir() != b[k].dir();
}

struct MassSearch {
  std::vector<Trace> traces;
  std::vector<Formula> pcs;
  std::vector<Rational> weights, suffix;
  Solver& solver;
  std::vector<std::size_t> chosen, best;
  Rational best_mass = -1;
  Formula best_pre = Formula::make_false();

  void run(std::size_t i, const Formula& pre, const Rational& mass) {
    if (mass > best_mass) {
      best_mass = mass;
      best = chosen;
      best_pre = pre;
    }
    if (i == traces.size() || mass + suffix[i] <= best_mass) return;
    bool fits = std::all_of(chosen.begin(), chosen.end(),
                            [&](std::size_t j) { return mergeable_pair(traces[i], traces[j]); });
    if (fits) {
      Formula next = pre && pcs[i];
      if (solver.is_sat(next)) {
        chosen.push_back(i);
        run(i + 1, solver.simplify(next), mass + weights[i]);
        chosen.pop_back();
      }
    }
    run(i + 1, pre, mass);
  }
};

}  // namespace

Counterexample max_violation_mass(const std::vector<Trace>& traces, const Specification& spec,
                                  Solver& solver) {
  MassSearch s{traces, {}, {}, {}, solver, {}, {}, -1, Formula::make_false()};
  std::stable_sort(s.traces.begin(), s.traces.end(),
                   [](const Trace& a, const Trace& b) { return weight(a) > weight(b); });
  for (const auto& t : s.traces) {
    s.pcs.push_back(path_condition(t, spec));
    s.weights.push_back(weight(t));
  }
  s.suffix.assign(s.traces.size() + 1, 0);
  for (std::size_t i = s.traces.size(); i-- > 0;) s.suffix[i] = s.suffix[i + 1] + s.weights[i];
  s.run(0, spec.pre, 0);
  Counterexample c;
  for (auto i : s.best) c.traces.push_back(s.traces[i]);
  c.error_pre = s.best.empty() ? spec.pre : s.best_pre;
  c.total_vp = s.best.empty() ? Rational(0) : s.best_mass;
  return c;
}

Verdict verify_refutational(const Pcfa& program, const Specification& spec, const Rational& beta,
                            Solver& solver, const VerifyOptions& options, VerifyLog* log) {
  std::size_t iterations = 0, traces = 0;
  try {
    UpperBound whole = mdp_upper_bound(program);
    if (whole.value <= beta) return sat(whole.value, 0, 0);
    std::vector<Label> sigma = program.alphabet();
    Certified q;
    std::vector<Trace> found;
    Counterexample best;
    while (true) {
      Pcfa residue = difference(program, q.cover);
      if (!found.empty()) residue = difference(residue, trie(found));
      Rational rest = is_empty(residue) ? Rational(0) : mdp_upper_bound(tidy(residue)).value;
      if (rest + best.total_vp <= beta) {
        say(log, "residue bound " + to_string(rest) + " plus found mass " + to_string(best.total_vp));
        return sat(rest + best.total_vp, iterations, traces);
      }
      if (iterations >= options.max_iterations)
        return inconclusive("iteration cap of " + std::to_string(options.max_iterations) + " reached",
                            iterations, traces);
      Trace t = *shortest_accepted_trace(residue);
      ++iterations;
      ++traces;
      TraceClass c = classify(t, spec, solver);
      if (!c.violating) {
        say(log, "non-violating " + to_string(t));
        q.add(generalize_nonviolating(t, spec, sigma, solver));
        continue;
      }
      say(log, "violating " + to_string(t));
      found.push_back(t);
      best = max_violation_mass(found, spec, solver);
      if (best.total_vp > beta) return unsat(best, program, spec, beta, solver, iterations, traces);
    }
  } catch (const SolverUnknown& e) {
    return inconclusive(std::string("solver: ") + e.what(), iterations, traces);
  }
}

DecompositionResult check_decomposition(const Pcfa& program, const Specification& spec,
                                        const Rational& beta,
                                        const std::vector<FloydHoareAutomaton>& qs, const Pcfa& a,
                                        Solver& solver) {
  DecompositionResult r;
  try {
    std::vector<Pcfa> bases;
    for (std::size_t i = 0; i < qs.size(); ++i) {
      const auto& f = qs[i];
      std::string name = "Q[" + std::to_string(i) + "]";
      if (!check_floyd_hoare(f, solver)) {
        r.reason = name + ": an edge is not a valid Hoare triple";
        return r;
      }
      if (!solver.entails(spec.pre, f.lambda[f.base.initial()])) {
        r.reason = name + ": the precondition does not imply the initial proposition";
        return r;
      }
      for (Location l : f.base.accepting_locations())
        if (!solver.entails(f.lambda[l], spec.post)) {
          r.reason = name + ": accepting proposition " + f.lambda[l].to_string() +
                     " does not imply the postcondition";
          return r;
        }
      bases.push_back(f.base);
    }
    Pcfa qcover = bases.empty() ? Pcfa::empty() : minimize(unite(bases));
    if (!is_empty(difference(difference(program, qcover), a))) {
      r.reason = "the program has traces covered by neither part";
      return r;
    }
    Pcfa rest = tidy(intersect(difference(a, qcover), program));
    r.upper_bound = is_empty(rest) ? Rational(0) : mdp_upper_bound(rest).value;
    if (r.upper_bound > beta) {
      r.reason = "bound " + to_string(r.upper_bound) + " exceeds " + to_string(beta);
      return r;
    }
    r.certified = true;
  } catch (const SolverUnknown& e) {
    r.reason = std::string("solver: ") + e.what();
  }
  return r;
}

}  // namespace pta
