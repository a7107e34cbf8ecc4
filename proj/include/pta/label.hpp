#pragma once

#include "pta/formula.hpp"

#include <compare>
#include <memory>
#include <string>
#include <vector>

namespace pta {

/// Declaration order is the tie-break rank used everywhere labels are ordered.
enum class LabelKind { Assign, Assume, Skip, Pb, Nd };
enum class Dir { L, R };

/// One edge symbol of a control-flow automaton. Cheap to copy.
class Label {
 public:
  static Label assign(const std::string& var, const LinearTerm& rhs);
  static Label assign_bool(const std::string& var, const Formula& rhs);
  static Label assume(const Formula& cond);
  static Label skip();
  static Label pb(int id, Dir dir);
  static Label nd(int tag);

  LabelKind kind() const;
  const std::string& var() const;       // Assign
  bool is_bool_assign() const;          // Assign
  const LinearTerm& int_rhs() const;    // Assign (int)
  const Formula& bool_rhs() const;      // Assign (bool)
  const Formula& cond() const;          // Assume
  int id() const;                       // Pb id or Nd tag
  Dir dir() const;                      // Pb
  bool is_pb() const { return kind() == LabelKind::Pb; }
  /// The Pb label with the same id and opposite direction.
  Label partner() const;

  const std::string& to_string() const;

  bool operator==(const Label& o) const;
  std::strong_ordering operator<=>(const Label& o) const;
  std::size_t hash() const;

 private:
  struct Data;
  static Label make(std::shared_ptr<Data> d);
  explicit Label(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
  std::shared_ptr<const Data> d_;
};

struct LabelHash {
  std::size_t operator()(const Label& l) const { return l.hash(); }
};

using Trace = std::vector<Label>;

/// `[l1, l2, ...]`
std::string to_string(const Trace& t);
/// Lexicographic comparison under the label order.
bool trace_less(const Trace& a, const Trace& b);

}  // namespace pta
