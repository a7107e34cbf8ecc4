#pragma once

#include "pta/formula.hpp"

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace pta {

enum class SatStatus { Sat, Unsat, Unknown };

struct SatResult {
  SatStatus status = SatStatus::Unknown;
  State model;  // meaningful only when status == Sat
  std::string diagnostic;
};

/// A query the backend could not decide (timeout, crash, budget).
class SolverUnknown : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolverBackend {
 public:
  virtual ~SolverBackend() = default;
  virtual std::string name() const = 0;
  virtual SatResult check(const Formula& f, const SortMap& sorts) = 0;
  virtual bool supports_interpolation() const { return false; }
  /// Sequence interpolants I1..I(n-1) for the unsatisfiable conjunction parts[0..n-1].
  virtual std::optional<std::vector<Formula>> interpolants(const std::vector<Formula>& parts,
                                                           const SortMap& sorts) {
    (void)parts;
    (void)sorts;
    return std::nullopt;
  }
};

/// In-process decision procedure: case splitting over the boolean structure
/// plus the Omega test for the integer part.
std::unique_ptr<SolverBackend> make_builtin_backend(std::size_t step_budget = 200000);

struct SmtLibConfig {
  std::string path = "z3";
  std::vector<std::string> args = {"-in", "-smt2"};
  double timeout_seconds = 10.0;
  bool interpolation = false;  // backend answers (get-interpolants ...)
};

/// External solver speaking SMT-LIB 2 over stdin/stdout; one persistent process.
std::unique_ptr<SolverBackend> make_smtlib_backend(const SmtLibConfig& config);

struct SolverStats {
  std::size_t queries = 0;
  std::size_t cache_hits = 0;
  std::size_t unknowns = 0;
};

/// One solver session. Not thread-safe; use one per worker.
class Solver {
 public:
  Solver();
  explicit Solver(std::unique_ptr<SolverBackend> backend);

  SatResult check_sat(const Formula& f);
  /// Like check_sat but throws SolverUnknown on Unknown.
  bool is_sat(const Formula& f);
  bool entails(const Formula& p, const Formula& q);
  bool equivalent(const Formula& a, const Formula& b);
  /// Equivalent formula, usually smaller.
  Formula simplify(const Formula& f);

  SolverBackend& backend() { return *backend_; }
  const SolverStats& stats() const { return stats_; }

 private:
  Formula simplify_rec(const Formula& f);
  std::unique_ptr<SolverBackend> backend_;
  std::unordered_map<std::string, SatResult> cache_;
  std::unordered_map<std::string, Formula> simplify_cache_;
  SolverStats stats_;
};

/// Combines single-variable bounds within one conjunction level
/// (e.g. `C >= 1 && C <= 1` becomes `C = 1`). Purely syntactic.
Formula tighten_bounds(const Formula& f);

}  // namespace pta
