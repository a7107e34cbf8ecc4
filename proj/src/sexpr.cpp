#include "pta/sexpr.hpp"

#include <cctype>
#include <stdexcept>
#include <variant>

namespace pta::smt {

namespace {

void skip_ws(std::string_view t, std::size_t& p) {
  while (p < t.size()) {
    if (std::isspace(static_cast<unsigned char>(t[p]))) {
      ++p;
    } else if (t[p] == ';') {
      while (p < t.size() && t[p] != '\n') ++p;
    } else {
      break;
    }
  }
}

}  // namespace

SExpr parse_sexpr(std::string_view t, std::size_t& p) {
  skip_ws(t, p);
  if (p >= t.size()) throw std::invalid_argument("s-expression: unexpected end");
  SExpr e;
  if (t[p] == '(') {
    ++p;
    e.is_atom = false;
    while (true) {
      skip_ws(t, p);
      if (p >= t.size()) throw std::invalid_argument("s-expression: unbalanced '('");
      if (t[p] == ')') {
        ++p;
        return e;
      }
      e.list.push_back(parse_sexpr(t, p));
    }
  }
  if (t[p] == ')') throw std::invalid_argument("s-expression: unexpected ')'");
  if (t[p] == '|') {
    auto end = t.find('|', p + 1);
    if (end == std::string_view::npos) throw std::invalid_argument("s-expression: open |symbol|");
    e.atom = std::string(t.substr(p + 1, end - p - 1));
    p = end + 1;
    return e;
  }
  if (t[p] == '"') {
    std::size_t q = p + 1;
    while (q < t.size()) {
      if (t[q] == '"') {
        if (q + 1 < t.size() && t[q + 1] == '"') {
          q += 2;
          continue;
        }
        break;
      }
      ++q;
    }
    if (q >= t.size()) throw std::invalid_argument("s-expression: open string");
    e.atom = std::string(t.substr(p, q - p + 1));
    p = q + 1;
    return e;
  }
  std::size_t q = p;
  while (q < t.size() && !std::isspace(static_cast<unsigned char>(t[q])) && t[q] != '(' &&
         t[q] != ')')
    ++q;
  e.atom = std::string(t.substr(p, q - p));
  p = q;
  return e;
}

bool complete_sexpr(std::string_view t, std::size_t p) {
  skip_ws(t, p);
  if (p >= t.size()) return false;
  if (t[p] != '(') {
    // An atom is complete once followed by a delimiter.
    if (t[p] == '|') return t.find('|', p + 1) != std::string_view::npos;
    while (p < t.size() && !std::isspace(static_cast<unsigned char>(t[p])) && t[p] != '(' &&
           t[p] != ')')
      ++p;
    return p < t.size();
  }
  int depth = 0;
  bool in_bar = false, in_str = false;
  for (; p < t.size(); ++p) {
    char c = t[p];
    if (in_bar) {
      if (c == '|') in_bar = false;
      continue;
    }
    if (in_str) {
      if (c == '"') in_str = false;
      continue;
    }
    if (c == '|') in_bar = true;
    else if (c == '"') in_str = true;
    else if (c == '(') ++depth;
    else if (c == ')' && --depth == 0) return true;
  }
  return false;
}

std::string to_string(const SExpr& e) {
  if (e.is_atom) return e.atom;
  std::string s = "(";
  for (std::size_t i = 0; i < e.list.size(); ++i) s += (i ? " " : "") + to_string(e.list[i]);
  return s + ")";
}

std::string quote_symbol(const std::string& name) { return "|" + name + "|"; }

namespace {

std::string num(std::int64_t v) {
  if (v == INT64_MIN) return "(- 9223372036854775808)";
  if (v < 0) return "(- " + std::to_string(-v) + ")";
  return std::to_string(v);
}

}  // namespace

std::string to_smtlib(const LinearTerm& t) {
  std::vector<std::string> parts;
  for (const auto& [v, c] : t.coefficients())
    parts.push_back(c == 1 ? quote_symbol(v) : "(* " + num(c) + " " + quote_symbol(v) + ")");
  if (t.constant_part() != 0 || parts.empty()) parts.push_back(num(t.constant_part()));
  if (parts.size() == 1) return parts.front();
  std::string s = "(+";
  for (const auto& p : parts) s += " " + p;
  return s + ")";
}

std::string to_smtlib(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::True: return "true";
    case Formula::Kind::False: return "false";
    case Formula::Kind::BoolVar: return quote_symbol(f.var());
    case Formula::Kind::NotVar: return "(not " + quote_symbol(f.var()) + ")";
    case Formula::Kind::Atom: {
      std::string t = to_smtlib(f.term());
      switch (f.rel()) {
        case Rel::Le: return "(<= " + t + " 0)";
        case Rel::Eq: return "(= " + t + " 0)";
        case Rel::Ne: return "(not (= " + t + " 0))";
      }
      break;
    }
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::string s = f.kind() == Formula::Kind::And ? "(and" : "(or";
      for (const auto& k : f.children()) s += " " + to_smtlib(k);
      return s + ")";
    }
  }
  throw std::logic_error("to_smtlib");
}

namespace {

using Value = std::variant<LinearTerm, Formula>;
using Env = std::vector<std::map<std::string, Value>>;

Value eval(const SExpr& e, const SortMap& sorts, Env& env);

LinearTerm as_term(const Value& v) {
  if (auto t = std::get_if<LinearTerm>(&v)) return *t;
  throw std::invalid_argument("expected an integer term");
}

Formula as_formula(const Value& v) {
  if (auto f = std::get_if<Formula>(&v)) return *f;
  throw std::invalid_argument("expected a boolean term");
}

bool is_numeral(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

Value eval(const SExpr& e, const SortMap& sorts, Env& env) {
  if (e.is_atom) {
    for (auto it = env.rbegin(); it != env.rend(); ++it) {
      auto f = it->find(e.atom);
      if (f != it->end()) return f->second;
    }
    if (e.atom == "true") return Formula::make_true();
    if (e.atom == "false") return Formula::make_false();
    if (is_numeral(e.atom)) return LinearTerm::constant(std::stoll(e.atom));
    auto s = sorts.find(e.atom);
    if (s == sorts.end()) throw std::invalid_argument("unknown symbol " + e.atom);
    if (s->second == Sort::Bool) return Formula::bool_var(e.atom);
    return LinearTerm::variable(e.atom);
  }
  if (e.list.empty() || !e.list[0].is_atom) throw std::invalid_argument("bad application");
  const std::string& op = e.list[0].atom;
  std::vector<const SExpr*> args;
  for (std::size_t i = 1; i < e.list.size(); ++i) args.push_back(&e.list[i]);
  if (op == "let") {
    if (args.size() != 2 || args[0]->is_atom) throw std::invalid_argument("bad let");
    std::map<std::string, Value> frame;
    for (const auto& b : args[0]->list) {
      if (b.is_atom || b.list.size() != 2 || !b.list[0].is_atom)
        throw std::invalid_argument("bad let binding");
      frame.emplace(b.list[0].atom, eval(b.list[1], sorts, env));
    }
    env.push_back(std::move(frame));
    Value v = eval(*args[1], sorts, env);
    env.pop_back();
    return v;
  }
  std::vector<Value> vs;
  for (auto a : args) vs.push_back(eval(*a, sorts, env));
  if (op == "and" || op == "or") {
    std::vector<Formula> fs;
    for (const auto& v : vs) fs.push_back(as_formula(v));
    return op == "and" ? Formula::conjunction(fs) : Formula::disjunction(fs);
  }
  if (op == "not" && vs.size() == 1) return !as_formula(vs[0]);
  if (op == "=>" && vs.size() >= 2) {
    Formula r = as_formula(vs.back());
    for (std::size_t i = vs.size() - 1; i-- > 0;) r = Formula::implies(as_formula(vs[i]), r);
    return r;
  }
  if (op == "+") {
    LinearTerm t;
    for (const auto& v : vs) t = t + as_term(v);
    return t;
  }
  if (op == "-") {
    if (vs.size() == 1) return -as_term(vs[0]);
    LinearTerm t = as_term(vs[0]);
    for (std::size_t i = 1; i < vs.size(); ++i) t = t - as_term(vs[i]);
    return t;
  }
  if (op == "*") {
    LinearTerm t = LinearTerm::constant(1);
    for (const auto& v : vs) {
      LinearTerm u = as_term(v);
      if (t.is_constant())
        t = u.scaled(t.constant_part());
      else if (u.is_constant())
        t = t.scaled(u.constant_part());
      else
        throw std::invalid_argument("nonlinear product");
    }
    return t;
  }
  static const std::map<std::string, CmpOp> cmp = {
      {"<", CmpOp::Lt}, {"<=", CmpOp::Le}, {">=", CmpOp::Ge}, {">", CmpOp::Gt}};
  if ((cmp.count(op) || op == "=" || op == "distinct") && vs.size() >= 2) {
    std::vector<Formula> fs;
    for (std::size_t i = 0; i + 1 < vs.size(); ++i) {
      if (op == "=" || op == "distinct") {
        Formula eq;
        if (std::holds_alternative<Formula>(vs[i]))
          eq = Formula::iff(as_formula(vs[i]), as_formula(vs[i + 1]));
        else
          eq = Formula::compare(as_term(vs[i]), CmpOp::Eq, as_term(vs[i + 1]));
        fs.push_back(op == "=" ? eq : !eq);
      } else {
        fs.push_back(Formula::compare(as_term(vs[i]), cmp.at(op), as_term(vs[i + 1])));
      }
    }
    return Formula::conjunction(fs);
  }
  throw std::invalid_argument("unsupported operator " + op);
}

}  // namespace

Formula formula_from_sexpr(const SExpr& e, const SortMap& sorts) {
  Env env;
  return as_formula(eval(e, sorts, env));
}

std::int64_t value_from_sexpr(const SExpr& e) {
  if (e.is_atom) {
    if (e.atom == "true") return 1;
    if (e.atom == "false") return 0;
    if (is_numeral(e.atom)) return std::stoll(e.atom);
    throw std::invalid_argument("unexpected value " + e.atom);
  }
  if (e.list.size() == 2 && e.list[0].is_atom && e.list[0].atom == "-")
    return -value_from_sexpr(e.list[1]);
  throw std::invalid_argument("unexpected value " + to_string(e));
}

}  // namespace pta::smt
