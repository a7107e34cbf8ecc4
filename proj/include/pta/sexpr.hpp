#pragma once

#include "pta/formula.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace pta::smt {

struct SExpr {
  bool is_atom = true;
  std::string atom;  // symbols keep no |quotes|
  std::vector<SExpr> list;
};

/// Parses one s-expression starting at `pos`; advances `pos`. Throws on malformed input.
SExpr parse_sexpr(std::string_view text, std::size_t& pos);
/// True when `text` holds at least one complete s-expression after `pos`.
bool complete_sexpr(std::string_view text, std::size_t pos);
std::string to_string(const SExpr& e);

std::string quote_symbol(const std::string& name);
std::string to_smtlib(const LinearTerm& t);
std::string to_smtlib(const Formula& f);

/// Converts a boolean SMT-LIB term (with let, and/or/not/=>, comparisons,
/// linear arithmetic) back to a formula. Throws std::invalid_argument on anything else.
Formula formula_from_sexpr(const SExpr& e, const SortMap& sorts);
/// Integer or boolean constant value such as `5`, `(- 3)`, `true`.
std::int64_t value_from_sexpr(const SExpr& e);

}  // namespace pta::smt
