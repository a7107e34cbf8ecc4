#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

// Integer feasibility of conjunctions of linear constraints (Omega test).
namespace pta::lia {

/// `sum(coef[i] * x[i]) + constant >= 0`, or `= 0` when `equality` is set.
struct Constraint {
  std::vector<std::int64_t> coef;
  std::int64_t constant = 0;
  bool equality = false;
};

class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded() : std::runtime_error("integer solver budget exceeded") {}
};

/// Decides integer feasibility over `num_vars` unbounded variables. Returns a
/// model when feasible. Each recursive elimination step consumes one unit of
/// `budget`; running out throws BudgetExceeded. Coefficient overflow throws
/// ArithmeticOverflow.
std::optional<std::vector<std::int64_t>> solve(std::vector<Constraint> constraints,
                                               std::size_t num_vars, std::size_t& budget);

}  // namespace pta::lia
