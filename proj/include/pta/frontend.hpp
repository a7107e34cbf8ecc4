#pragma once

#include "pta/formula.hpp"
#include "pta/pcfa.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pta {

/// Hoare triple {pre} P {post} with a tolerated violation probability.
struct Specification {
  Formula pre = Formula::make_true();
  Formula post = Formula::make_true();
  Rational beta = 0;
};

struct VarDecl {
  std::string name;
  Sort sort = Sort::Int;
  bool operator==(const VarDecl&) const = default;
};

struct Stmt {
  enum class Kind { Assign, Skip, Seq, If, While, ProbChoice, NondetChoice };
  Kind kind = Kind::Skip;
  std::string var;                     // Assign
  std::optional<LinearTerm> int_rhs;   // Assign to an int
  std::optional<Formula> bool_rhs;     // Assign to a bool
  Formula cond;                        // If / While
  std::vector<Stmt> body;              // Seq: items; If: then, else; While: body; choices: left, right
  int id = -1;                         // ProbChoice / NondetChoice

  bool operator==(const Stmt& o) const;
};

struct Program {
  std::vector<VarDecl> decls;
  Stmt body;
  SortMap sorts() const;
  bool operator==(const Program& o) const { return decls == o.decls && body == o.body; }
};

struct ParsedFile {
  Program program;
  Specification spec;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_, column_;
};

ParsedFile parse(std::string_view source);
ParsedFile parse_file(const std::string& path);
/// A formula over the given variables, e.g. `C >= 0 && C <= 3`.
Formula parse_formula(std::string_view text, const SortMap& sorts);
/// A label in its printed form: `X := X + 1`, `assume C >= 1`, `skip`,
/// `Pb(0,L)`, `Nd(3)`.
Label parse_label(std::string_view text, const SortMap& sorts);
/// Source text that parses back to an equal program and specification.
std::string pretty_print(const ParsedFile& file);

/// Locations 0 (initial) and 1 (accepting) first; deterministic; nothing leaves 1.
Pcfa to_pcfa(const Program& program);

}  // namespace pta
