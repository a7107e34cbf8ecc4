#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace pta {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Renders a rational as `p/q` (or `p` when the denominator is one).
std::string to_string(const Rational& r);
/// Parses `p/q`, `p`, or a finite decimal such as `0.375`.
Rational parse_rational(const std::string& text);
/// Decimal rendering with `digits` fractional digits, for readability only.
std::string to_decimal(const Rational& r, int digits = 6);

enum class Sort { Int, Bool };

/// Program state: every declared variable mapped to a value; booleans are 0/1.
using State = std::map<std::string, std::int64_t>;

/// Variable name to sort, as collected from formulas or declarations.
using SortMap = std::map<std::string, Sort>;

/// Thrown when 64-bit arithmetic on coefficients or values overflows.
class ArithmeticOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);

/// Integer linear term `sum(coef * var) + constant`; zero coefficients are never stored.
class LinearTerm {
 public:
  LinearTerm() = default;
  static LinearTerm constant(std::int64_t c);
  static LinearTerm variable(const std::string& name, std::int64_t coef = 1);

  const std::map<std::string, std::int64_t>& coefficients() const { return coeffs_; }
  std::int64_t constant_part() const { return constant_; }
  std::int64_t coefficient(const std::string& var) const;
  bool is_constant() const { return coeffs_.empty(); }
  bool mentions(const std::string& var) const { return coeffs_.count(var) != 0; }

  LinearTerm operator+(const LinearTerm& o) const;
  LinearTerm operator-(const LinearTerm& o) const;
  LinearTerm operator-() const { return scaled(-1); }
  LinearTerm scaled(std::int64_t k) const;
  LinearTerm without_constant() const;

  LinearTerm substitute(const std::string& var, const LinearTerm& replacement) const;
  std::int64_t evaluate(const State& s) const;

  std::string to_string() const;

  auto operator<=>(const LinearTerm&) const = default;
  bool operator==(const LinearTerm&) const = default;

 private:
  std::map<std::string, std::int64_t> coeffs_;
  std::int64_t constant_ = 0;
};

enum class CmpOp { Lt, Le, Eq, Ne, Ge, Gt };

/// Relation of a normalized atom `term REL 0`.
enum class Rel { Le, Eq, Ne };

/// Quantifier-free formula over booleans and linear integer atoms.
///
/// Values are immutable and always kept in a canonical negation normal form:
/// negation only wraps boolean variables, atoms are gcd-normalized, and
/// conjunctions/disjunctions are flattened, deduplicated and sorted by their
/// printed form. Two formulas are equal iff their printed forms are equal.
class Formula {
 public:
  enum class Kind { True, False, BoolVar, NotVar, Atom, And, Or };

  Formula();  // true

  static Formula make_true();
  static Formula make_false();
  static Formula constant(bool value) { return value ? make_true() : make_false(); }
  static Formula bool_var(const std::string& name);
  static Formula atom(const LinearTerm& term, Rel rel);
  static Formula compare(const LinearTerm& lhs, CmpOp op, const LinearTerm& rhs);
  static Formula conjunction(std::vector<Formula> parts);
  static Formula disjunction(std::vector<Formula> parts);
  static Formula implies(const Formula& a, const Formula& b);
  static Formula iff(const Formula& a, const Formula& b);

  Kind kind() const;
  bool is_true() const { return kind() == Kind::True; }
  bool is_false() const { return kind() == Kind::False; }
  bool is_literal() const;

  const std::string& var() const;            // BoolVar / NotVar
  const LinearTerm& term() const;            // Atom
  Rel rel() const;                           // Atom
  const std::vector<Formula>& children() const;  // And / Or

  /// Top-level conjuncts (the formula itself unless it is a conjunction; empty for true).
  std::vector<Formula> conjuncts() const;

  Formula substitute(const std::string& var, const LinearTerm& replacement) const;
  Formula substitute_bool(const std::string& var, const Formula& replacement) const;
  bool mentions(const std::string& var) const;

  bool evaluate(const State& s) const;

  void collect_sorts(SortMap& out) const;
  std::set<std::string> variables() const;

  const std::string& to_string() const;
  std::size_t size() const;

  bool operator==(const Formula& o) const;
  std::strong_ordering operator<=>(const Formula& o) const;

 private:
  friend Formula operator!(const Formula& a);
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Formula make_node(Kind kind, std::string var, LinearTerm term, Rel rel,
                           std::vector<Formula> kids);
  std::shared_ptr<const Node> node_;
};

Formula operator&&(const Formula& a, const Formula& b);
Formula operator||(const Formula& a, const Formula& b);
Formula operator!(const Formula& a);

}  // namespace pta
