#pragma once

#include "pta/frontend.hpp"
#include "pta/pcfa.hpp"

#include <map>
#include <utility>

namespace pta {

/// Inclusive ranges for integer variables; unlisted integers are fixed to 0
/// and booleans range over both values.
struct StateDomain {
  std::map<std::string, std::pair<std::int64_t, std::int64_t>> ranges;
  std::size_t limit = 1000000;
};

struct ProbabilityInterval {
  Rational lower = 0;
  Rational upper = 0;
};

/// Maximum violation probability over the initial states of `dom`
/// satisfying the precondition, by exhaustive value computation truncated
/// after `step_bound` transitions. Throws std::invalid_argument when the
/// domain exceeds its limit.
ProbabilityInterval exact_violation_probability(const Pcfa& program, const SortMap& sorts,
                                                const Specification& spec, const StateDomain& dom,
                                                std::size_t step_bound);

/// Parses `VAR=a..b`.
std::pair<std::string, std::pair<std::int64_t, std::int64_t>> parse_range(const std::string& text);

}  // namespace pta
