#pragma once

#include "pta/semantics.hpp"

#include <optional>
#include <vector>

namespace pta {

/// Intermediate propositions I1..I(n-1) for `labels` = s1..sn such that
/// {prefix} s1 {I1}, ..., {I(n-1)} sn {!suffix} are all valid. Uses the
/// backend's interpolation when available and valid, the forward fallback
/// otherwise. Throws std::invalid_argument when prefix && pre_exists(labels,
/// suffix) is satisfiable.
std::vector<Formula> sequence_interpolants(const Formula& prefix, const Trace& labels,
                                           const Formula& suffix, Solver& solver);

/// Backend interpolants over an SSA encoding; absent when unsupported or invalid.
std::optional<std::vector<Formula>> backend_interpolants(const Formula& prefix, const Trace& labels,
                                                         const Formula& suffix, Solver& solver);

/// Forward strongest-postcondition approximation, weakened against the
/// demonic weakest precondition of the remaining suffix.
std::vector<Formula> fallback_interpolants(const Formula& prefix, const Trace& labels,
                                           const Formula& suffix, Solver& solver);

/// Conjuncts over-approximating the strongest postcondition of `pre` under `l`.
std::vector<Formula> sp_approx(const std::vector<Formula>& pre, const Label& l);

}  // namespace pta
