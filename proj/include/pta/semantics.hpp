#pragma once

#include "pta/frontend.hpp"
#include "pta/label.hpp"
#include "pta/solver.hpp"

#include <optional>

namespace pta {

/// 2^-n for n probabilistic labels.
Rational weight(const Trace& t);
std::size_t pb_count(const Trace& t);

/// Absent when an assumption fails.
std::optional<State> interpret(const Label& l, const State& s);
std::optional<State> interpret_trace(const Trace& t, State s);

/// States from which `l` can execute and end in `post` (assumptions conjoin).
Formula pre_exists(const Label& l, const Formula& post);
Formula pre_exists(const Trace& t, const Formula& post);
/// Weakest precondition with assumptions read as implications.
Formula wp_demonic(const Label& l, const Formula& post);
Formula wp_demonic(const Trace& t, const Formula& post);

/// pre && pre_exists(t, !post)
Formula path_condition(const Trace& t, const Specification& spec);

struct TraceClass {
  bool violating = false;
  Formula error_pre;  // the path condition when violating
};

TraceClass classify(const Trace& t, const Specification& spec, Solver& solver);

/// {p} l {q}: p && pre_exists(l, !q) is unsatisfiable.
bool hoare_valid(const Formula& p, const Label& l, const Formula& q, Solver& solver);

}  // namespace pta
