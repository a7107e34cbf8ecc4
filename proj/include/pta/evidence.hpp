#pragma once

#include "pta/frontend.hpp"
#include "pta/markov.hpp"
#include "pta/solver.hpp"

#include <optional>
#include <queue>
#include <string>
#include <vector>

namespace pta {

/// Traces of a CFMC by non-increasing weight, then length, then label order.
class TraceEnumerator {
 public:
  explicit TraceEnumerator(Pcfa m);
  std::optional<Trace> next();

 private:
  struct Entry {
    std::size_t pbs;
    Trace trace;
    Location loc;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const;
  };
  Pcfa m_;
  std::priority_queue<Entry, std::vector<Entry>, Later> queue_;
};

/// Convenience: the first `limit` traces of the stream.
std::vector<Trace> enumerate_by_weight(const Pcfa& m, std::size_t limit);

struct Mainstream {
  std::vector<Trace> traces;
  Formula total_pre = Formula::make_true();
  Rational total_weight = 0;
};

struct Counterexample {
  std::vector<Trace> traces;
  Formula error_pre = Formula::make_true();
  Rational total_vp = 0;
};

/// total_pre && pc is satisfiable.
bool compatible(const Formula& total_pre, const Formula& pc, Solver& solver);

/// The violating module under examination: one body per split region.
/// Without splits there is a single branch guarded by True and the
/// assembled automaton is the body itself.
struct SplitModule {
  struct Branch {
    Formula guard = Formula::make_true();
    Pcfa body = Pcfa::empty();
  };
  std::vector<Branch> branches;

  SplitModule();
  explicit SplitModule(Pcfa body);
  bool is_split() const;
  /// A fresh root with `assume guard` edges into the bodies, or the body itself.
  Pcfa assemble() const;
  /// Adds the words of `extra` to every branch.
  void add(const Pcfa& extra);
  /// Removes the words of `a` from every branch (through the guard edge when split).
  void erase(const Pcfa& a);
};

/// Refines every branch guard g into g && h and g && !h (dropping
/// unsatisfiable halves). Words of `on_h` are erased from the h-halves and
/// words of `on_not_h` from the !h-halves, each only when it cannot violate
/// from any state of that half. Throws std::invalid_argument when h or !h is
/// unsatisfiable.
SplitModule add_split_condition(const SplitModule& module, const Formula& h,
                                const Specification& spec, const std::vector<Trace>& on_h,
                                const std::vector<Trace>& on_not_h, Solver& solver);

struct ExamineEvent {
  enum class Kind { Bound, Mainstream, Incompatible, Fake, Certificate, Split, Counterexample, Verified };
  Kind kind;
  Trace trace;
  Rational value = 0;  // trace weight, bound, or accumulated mass
  Formula formula = Formula::make_true();
  std::string to_string() const;
};

struct ExamineOptions {
  std::size_t trace_budget = 10000;
  std::size_t max_rounds = 500;
};

struct ExamineOutcome {
  enum class Kind { Verified, CounterexampleFound, Certificate, Inconclusive };
  Kind kind = Kind::Inconclusive;
  Rational upper_bound = 0;  // Verified: the bound; otherwise the bound of the round
  std::optional<Counterexample> counterexample;
  // Certificate
  std::vector<Trace> fakes;
  std::vector<Trace> incompatibles;
  Rational mass = 0;
  Mainstream mainstream;
  std::string reason;  // Inconclusive
};

/// One enumeration round over the reason CFMC `m` of value `p`.
ExamineOutcome examine_round(const Pcfa& m, const Rational& p, const Specification& spec,
                             const Rational& beta, Solver& solver, std::size_t trace_budget,
                             std::vector<ExamineEvent>* log = nullptr);

struct ExamineResult {
  ExamineOutcome outcome;  // Verified, CounterexampleFound or Inconclusive
  /// Fakes (split guards removed) that are non-violating on their own.
  std::vector<Trace> fakes;
  std::size_t rounds = 0;
};

/// Iterates rounds until the module is verified, a counterexample is found,
/// or a budget runs out. Updates `module` with erasures and splits.
ExamineResult examine(SplitModule& module, const Specification& spec, const Rational& beta,
                      Solver& solver, const ExamineOptions& options = {},
                      std::vector<ExamineEvent>* log = nullptr);

/// Checks every counterexample condition against the program; reasons for
/// failure are appended to `why`.
bool validate_counterexample(const Pcfa& program, const Specification& spec, const Rational& beta,
                             const Counterexample& cex, Solver& solver,
                             std::vector<std::string>* why = nullptr);

}  // namespace pta
