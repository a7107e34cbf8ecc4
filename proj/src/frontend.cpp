#include "pta/frontend.hpp"

#include <cctype>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

namespace pta {

ParseError::ParseError(const std::string& msg, int line, int column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
      line_(line),
      column_(column) {}

bool Stmt::operator==(const Stmt& o) const {
  return kind == o.kind && var == o.var && int_rhs == o.int_rhs && bool_rhs == o.bool_rhs &&
         cond == o.cond && body == o.body && id == o.id;
}

SortMap Program::sorts() const {
  SortMap m;
  for (const auto& d : decls) m[d.name] = d.sort;
  return m;
}

namespace {

enum class Tok { Ident, Int, Sym, End };

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

std::vector<Token> lex(std::string_view src, int line0 = 1, int col0 = 1) {
  static const char* syms[] = {"<+>", "<*>", ":=", "<=", ">=", "!=", "==", "&&", "||",
                               "(",   ")",   "{",  "}",  ";",  ",",  "+",  "-",  "*",
                               "<",   ">",   "=",  "!"};
  std::vector<Token> out;
  int line = line0, col = col0;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    int l = line, cc = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' ||
                                src[j] == '\''))
        ++j;
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), l, cc});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Tok::Int, std::string(src.substr(i, j - i)), l, cc});
      advance(j - i);
      continue;
    }
    bool matched = false;
    for (const char* s : syms) {
      std::string_view sv(s);
      if (src.substr(i, sv.size()) == sv) {
        out.push_back({Tok::Sym, std::string(sv), l, cc});
        advance(sv.size());
        matched = true;
        break;
      }
    }
    if (!matched) throw ParseError(std::string("syntax error: unexpected character '") + c + "'", l, cc);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

// Untyped expression tree; typed against the declarations afterwards.
struct Expr {
  enum class K { Int, Var, True, False, Neg, Add, Sub, Mul, Cmp, Not, And, Or };
  K k;
  std::string text;  // Var name, Int digits, Cmp operator
  std::vector<std::shared_ptr<Expr>> args;
  int line = 0, col = 0;
};
using ExprP = std::shared_ptr<Expr>;

class Parser {
 public:
  Parser(std::vector<Token> toks, const SortMap* sorts) : t_(std::move(toks)), sorts_(sorts) {}

  const Token& peek(std::size_t k = 0) const { return t_[std::min(pos_ + k, t_.size() - 1)]; }
  bool at(const std::string& sym) const {
    return (peek().kind == Tok::Sym || peek().kind == Tok::Ident) && peek().text == sym;
  }
  bool at_end() const { return peek().kind == Tok::End; }
  Token take() { return t_[pos_ < t_.size() - 1 ? pos_++ : pos_]; }
  [[noreturn]] void fail(const std::string& what) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError("syntax error: " + what + ", found " + found, t.line, t.col);
  }
  void expect(const std::string& sym) {
    if (!at(sym)) fail("expected '" + sym + "'");
    take();
  }

  ExprP expr() { return disj(); }

  ExprP disj() {
    ExprP l = conj();
    while (at("||")) {
      Token op = take();
      l = node(Expr::K::Or, op, {l, conj()});
    }
    return l;
  }
  ExprP conj() {
    ExprP l = neg();
    while (at("&&")) {
      Token op = take();
      l = node(Expr::K::And, op, {l, neg()});
    }
    return l;
  }
  ExprP neg() {
    if (at("!")) {
      Token op = take();
      return node(Expr::K::Not, op, {neg()});
    }
    return cmp();
  }
  ExprP cmp() {
    ExprP l = sum();
    static const std::set<std::string> ops = {"<", "<=", "=", "==", "!=", ">=", ">"};
    if (peek().kind == Tok::Sym && ops.count(peek().text)) {
      Token op = take();
      ExprP r = sum();
      ExprP n = node(Expr::K::Cmp, op, {l, r});
      n->text = op.text == "==" ? "=" : op.text;
      return n;
    }
    return l;
  }
  ExprP sum() {
    ExprP l = prod();
    while (at("+") || at("-")) {
      Token op = take();
      l = node(op.text == "+" ? Expr::K::Add : Expr::K::Sub, op, {l, prod()});
    }
    return l;
  }
  ExprP prod() {
    ExprP l = unary();
    while (at("*")) {
      Token op = take();
      l = node(Expr::K::Mul, op, {l, unary()});
    }
    return l;
  }
  ExprP unary() {
    if (at("-")) {
      Token op = take();
      return node(Expr::K::Neg, op, {unary()});
    }
    return primary();
  }
  ExprP primary() {
    const Token& t = peek();
    if (t.kind == Tok::Int) {
      Token x = take();
      auto n = node(Expr::K::Int, x, {});
      n->text = x.text;
      return n;
    }
    if (t.kind == Tok::Ident) {
      if (t.text == "true" || t.text == "false") {
        Token x = take();
        return node(x.text == "true" ? Expr::K::True : Expr::K::False, x, {});
      }
      if (keyword(t.text)) fail("expected an expression");
      Token x = take();
      auto n = node(Expr::K::Var, x, {});
      n->text = x.text;
      return n;
    }
    if (at("(")) {
      take();
      ExprP e = expr();
      expect(")");
      return e;
    }
    fail("expected an expression");
  }

  static bool keyword(const std::string& s) {
    static const std::set<std::string> kw = {"int", "bool", "skip", "if", "else", "while", "true",
                                             "false"};
    return kw.count(s) != 0;
  }

  // ---- typing
  Sort sort_of(const Expr& e) const {
    auto it = sorts_->find(e.text);
    if (it == sorts_->end())
      throw ParseError("undeclared variable '" + e.text + "'", e.line, e.col);
    return it->second;
  }

  static std::int64_t literal(const Expr& e) {
    try {
      std::size_t used = 0;
      long long v = std::stoll(e.text, &used);
      return v;
    } catch (const std::out_of_range&) {
      throw ParseError("integer literal out of range", e.line, e.col);
    }
  }

  LinearTerm int_term(const Expr& e) const {
    try {
      switch (e.k) {
        case Expr::K::Int: return LinearTerm::constant(literal(e));
        case Expr::K::Var:
          if (sort_of(e) != Sort::Int)
            throw ParseError("type error: boolean '" + e.text + "' used as an integer", e.line,
                             e.col);
          return LinearTerm::variable(e.text);
        case Expr::K::Neg: return -int_term(*e.args[0]);
        case Expr::K::Add: return int_term(*e.args[0]) + int_term(*e.args[1]);
        case Expr::K::Sub: return int_term(*e.args[0]) - int_term(*e.args[1]);
        case Expr::K::Mul: {
          LinearTerm a = int_term(*e.args[0]), b = int_term(*e.args[1]);
          if (a.is_constant()) return b.scaled(a.constant_part());
          if (b.is_constant()) return a.scaled(b.constant_part());
          throw ParseError("nonlinear expression", e.line, e.col);
        }
        default: throw ParseError("type error: expected an integer expression", e.line, e.col);
      }
    } catch (const ArithmeticOverflow&) {
      throw ParseError("integer overflow in expression", e.line, e.col);
    }
  }

  bool is_bool_expr(const Expr& e) const {
    switch (e.k) {
      case Expr::K::True:
      case Expr::K::False:
      case Expr::K::Cmp:
      case Expr::K::Not:
      case Expr::K::And:
      case Expr::K::Or: return true;
      case Expr::K::Var: return sort_of(e) == Sort::Bool;
      default: return false;
    }
  }

  Formula formula(const Expr& e) const {
    switch (e.k) {
      case Expr::K::True: return Formula::make_true();
      case Expr::K::False: return Formula::make_false();
      case Expr::K::Var:
        if (sort_of(e) != Sort::Bool)
          throw ParseError("type error: integer '" + e.text + "' used as a condition", e.line,
                           e.col);
        return Formula::bool_var(e.text);
      case Expr::K::Not: return !formula(*e.args[0]);
      case Expr::K::And: return formula(*e.args[0]) && formula(*e.args[1]);
      case Expr::K::Or: return formula(*e.args[0]) || formula(*e.args[1]);
      case Expr::K::Cmp: {
        const Expr& l = *e.args[0];
        const Expr& r = *e.args[1];
        if (is_bool_expr(l) || is_bool_expr(r)) {
          if (e.text != "=" && e.text != "!=")
            throw ParseError("type error: ordering on booleans", e.line, e.col);
          Formula eq = Formula::iff(formula(l), formula(r));
          return e.text == "=" ? eq : !eq;
        }
        static const std::map<std::string, CmpOp> ops = {
            {"<", CmpOp::Lt}, {"<=", CmpOp::Le}, {"=", CmpOp::Eq},
            {"!=", CmpOp::Ne}, {">=", CmpOp::Ge}, {">", CmpOp::Gt}};
        try {
          return Formula::compare(int_term(l), ops.at(e.text), int_term(r));
        } catch (const ArithmeticOverflow&) {
          throw ParseError("integer overflow in comparison", e.line, e.col);
        }
      }
      default: throw ParseError("type error: expected a condition", e.line, e.col);
    }
  }

  // ---- statements
  std::vector<VarDecl> decls(SortMap& sorts) {
    std::vector<VarDecl> out;
    while (at("int") || at("bool")) {
      Sort s = take().text == "int" ? Sort::Int : Sort::Bool;
      while (true) {
        const Token& t = peek();
        if (t.kind != Tok::Ident || keyword(t.text)) fail("expected a variable name");
        if (sorts.count(t.text))
          throw ParseError("variable '" + t.text + "' declared twice", t.line, t.col);
        sorts[t.text] = s;
        out.push_back({t.text, s});
        take();
        if (at(",")) {
          take();
          continue;
        }
        break;
      }
      expect(";");
    }
    return out;
  }

  static void append_flat(std::vector<Stmt>& items, Stmt s) {
    if (s.kind == Stmt::Kind::Seq) {
      for (auto& x : s.body) items.push_back(std::move(x));
    } else {
      items.push_back(std::move(s));
    }
  }

  static Stmt seq_of(std::vector<Stmt> items) {
    if (items.empty()) return Stmt{};
    if (items.size() == 1) return std::move(items.front());
    Stmt s;
    s.kind = Stmt::Kind::Seq;
    s.body = std::move(items);
    return s;
  }

  Stmt stmt_list(bool in_block) {
    std::vector<Stmt> items;
    while (true) {
      if (in_block ? at("}") : at_end()) break;
      append_flat(items, stmt());
      if (at(";")) {
        while (at(";")) take();
        continue;
      }
      if (in_block ? at("}") : at_end()) break;
      fail("expected ';'");
    }
    return seq_of(std::move(items));
  }

  Stmt block() {
    expect("{");
    Stmt s = stmt_list(true);
    expect("}");
    return s;
  }

  Stmt stmt() {
    const Token& t = peek();
    if (at("skip")) {
      take();
      return Stmt{};
    }
    if (at("if")) {
      take();
      Stmt s;
      s.kind = Stmt::Kind::If;
      s.cond = formula(*expr());
      s.body.push_back(block());
      if (at("else")) {
        take();
        if (at("if")) {
          s.body.push_back(stmt());
        } else {
          s.body.push_back(block());
        }
      } else {
        s.body.push_back(Stmt{});
      }
      return s;
    }
    if (at("while")) {
      take();
      Stmt s;
      s.kind = Stmt::Kind::While;
      s.cond = formula(*expr());
      s.body.push_back(block());
      return s;
    }
    if (at("{")) {
      Stmt left = block();
      while (at("<+>") || at("<*>")) {
        Token op = take();
        Stmt right = block();
        Stmt c;
        c.kind = op.text == "<+>" ? Stmt::Kind::ProbChoice : Stmt::Kind::NondetChoice;
        c.id = next_id_++;
        c.body.push_back(std::move(left));
        c.body.push_back(std::move(right));
        left = std::move(c);
      }
      return left;
    }
    if (t.kind == Tok::Ident && !keyword(t.text)) {
      Token name = take();
      expect(":=");
      auto it = sorts_->find(name.text);
      if (it == sorts_->end())
        throw ParseError("undeclared variable '" + name.text + "'", name.line, name.col);
      ExprP rhs = expr();
      Stmt s;
      s.kind = Stmt::Kind::Assign;
      s.var = name.text;
      if (it->second == Sort::Int)
        s.int_rhs = int_term(*rhs);
      else
        s.bool_rhs = formula(*rhs);
      return s;
    }
    fail("expected a statement");
  }

 private:
  static ExprP node(Expr::K k, const Token& at, std::vector<ExprP> args) {
    auto e = std::make_shared<Expr>();
    e->k = k;
    e->args = std::move(args);
    e->line = at.line;
    e->col = at.col;
    return e;
  }

  std::vector<Token> t_;
  std::size_t pos_ = 0;
  const SortMap* sorts_;
  int next_id_ = 0;
};

struct Header {
  std::string key, text;
  int line, col;
};

Formula header_formula(const Header& h, const SortMap& sorts) {
  Parser p(lex(h.text, h.line, h.col), &sorts);
  Formula f = p.formula(*p.expr());
  if (!p.at_end()) p.fail("unexpected text after formula");
  return f;
}

}  // namespace

Formula parse_formula(std::string_view text, const SortMap& sorts) {
  Parser p(lex(text), &sorts);
  Formula f = p.formula(*p.expr());
  if (!p.at_end()) p.fail("unexpected text after formula");
  return f;
}

Label parse_label(std::string_view text, const SortMap& sorts) {
  Parser p(lex(text), &sorts);
  auto word = [&](const char* w) { return p.peek().kind == Tok::Ident && p.peek().text == w; };
  Label out = Label::skip();
  if (word("skip")) {
    p.take();
  } else if (word("assume")) {
    p.take();
    out = Label::assume(p.formula(*p.expr()));
  } else if ((word("Pb") || word("Nd")) && p.peek(1).text == "(") {
    bool pb = p.take().text == "Pb";
    p.take();
    if (p.peek().kind != Tok::Int) p.fail("expected an identifier number");
    int id = std::stoi(p.take().text);
    if (pb) {
      p.expect(",");
      std::string d = p.take().text;
      if (d != "L" && d != "R") p.fail("expected L or R");
      out = Label::pb(id, d == "L" ? Dir::L : Dir::R);
    } else {
      out = Label::nd(id);
    }
    p.expect(")");
  } else if (p.peek().kind == Tok::Ident && p.peek(1).text == ":=") {
    Token name = p.take();
    p.take();
    auto it = sorts.find(name.text);
    if (it == sorts.end()) throw ParseError("undeclared variable '" + name.text + "'", name.line, name.col);
    ExprP rhs = p.expr();
    out = it->second == Sort::Int ? Label::assign(name.text, p.int_term(*rhs))
                                  : Label::assign_bool(name.text, p.formula(*rhs));
  } else {
    p.fail("expected a label");
  }
  if (!p.at_end()) p.fail("unexpected text after label");
  return out;
}

ParsedFile parse(std::string_view source) {
  // Header lines start with '@'; blank them out so positions stay intact.
  std::string body(source);
  std::vector<Header> headers;
  std::size_t start = 0;
  int line = 1;
  while (start <= body.size()) {
    std::size_t end = body.find('\n', start);
    if (end == std::string::npos) end = body.size();
    std::size_t first = body.find_first_not_of(" \t\r", start);
    if (first != std::string::npos && first < end && body[first] == '@') {
      std::size_t k = first + 1;
      while (k < end && std::isalpha(static_cast<unsigned char>(body[k]))) ++k;
      Header h{body.substr(first + 1, k - first - 1), body.substr(k, end - k), line,
               static_cast<int>(k - start) + 1};
      auto cut = h.text.find("//");
      if (cut != std::string::npos) h.text.resize(cut);
      headers.push_back(h);
      for (std::size_t i = first; i < end; ++i) body[i] = ' ';
    }
    start = end + 1;
    ++line;
  }

  ParsedFile out;
  SortMap sorts;
  Parser p(lex(body), &sorts);
  out.program.decls = p.decls(sorts);
  out.program.body = p.stmt_list(false);

  std::set<std::string> seen;
  for (const auto& h : headers) {
    if (!seen.insert(h.key).second)
      throw ParseError("duplicate @" + h.key + " header", h.line, 1);
    if (h.key == "pre") {
      out.spec.pre = header_formula(h, sorts);
    } else if (h.key == "post") {
      out.spec.post = header_formula(h, sorts);
    } else if (h.key == "beta") {
      try {
        out.spec.beta = parse_rational(h.text);
      } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("syntax error: ") + e.what(), h.line, h.col);
      }
      if (out.spec.beta < 0 || out.spec.beta > 1)
        throw ParseError("beta outside [0,1]", h.line, h.col);
    } else {
      throw ParseError("unknown header @" + h.key, h.line, 1);
    }
  }
  return out;
}

ParsedFile parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

namespace {

void print_stmt(std::ostream& os, const Stmt& s, int indent);

void print_block(std::ostream& os, const Stmt& s, int indent) {
  os << "{\n";
  print_stmt(os, s, indent + 2);
  os << "\n" << std::string(indent, ' ') << "}";
}

void print_stmt(std::ostream& os, const Stmt& s, int indent) {
  std::string pad(indent, ' ');
  switch (s.kind) {
    case Stmt::Kind::Skip: os << pad << "skip"; break;
    case Stmt::Kind::Assign:
      os << pad << s.var << " := "
         << (s.int_rhs ? s.int_rhs->to_string() : s.bool_rhs->to_string());
      break;
    case Stmt::Kind::Seq:
      for (std::size_t i = 0; i < s.body.size(); ++i) {
        if (i) os << ";\n";
        print_stmt(os, s.body[i], indent);
      }
      break;
    case Stmt::Kind::If:
      os << pad << "if (" << s.cond.to_string() << ") ";
      print_block(os, s.body[0], indent);
      os << " else ";
      print_block(os, s.body[1], indent);
      break;
    case Stmt::Kind::While:
      os << pad << "while (" << s.cond.to_string() << ") ";
      print_block(os, s.body[0], indent);
      break;
    case Stmt::Kind::ProbChoice:
    case Stmt::Kind::NondetChoice:
      os << pad;
      print_block(os, s.body[0], indent);
      os << (s.kind == Stmt::Kind::ProbChoice ? " <+> " : " <*> ");
      print_block(os, s.body[1], indent);
      break;
  }
}

}  // namespace

std::string pretty_print(const ParsedFile& file) {
  std::ostringstream os;
  os << "@pre " << file.spec.pre.to_string() << "\n";
  os << "@post " << file.spec.post.to_string() << "\n";
  os << "@beta " << to_string(file.spec.beta) << "\n";
  const auto& decls = file.program.decls;
  for (std::size_t i = 0; i < decls.size();) {
    os << (decls[i].sort == Sort::Int ? "int " : "bool ") << decls[i].name;
    std::size_t j = i + 1;
    for (; j < decls.size() && decls[j].sort == decls[i].sort; ++j) os << ", " << decls[j].name;
    os << ";\n";
    i = j;
  }
  print_stmt(os, file.program.body, 0);
  os << "\n";
  return os.str();
}

}  // namespace pta
