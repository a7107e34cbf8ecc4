#include "pta/formula.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace pta {

std::string to_string(const Rational& r) {
  BigInt num = boost::multiprecision::numerator(r);
  BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Rational parse_rational(const std::string& raw) {
  std::string text;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) text += c;
  if (text.empty()) throw std::invalid_argument("empty rational");
  auto digits_only = [](const std::string& s, bool allow_sign) {
    if (s.empty()) return false;
    std::size_t i = 0;
    if (allow_sign && (s[0] == '-' || s[0] == '+')) i = 1;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
  };
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    std::string p = text.substr(0, slash), q = text.substr(slash + 1);
    if (!digits_only(p, true) || !digits_only(q, false))
      throw std::invalid_argument("malformed rational '" + raw + "'");
    BigInt qi(q);
    if (qi == 0) throw std::invalid_argument("zero denominator in '" + raw + "'");
    return Rational(BigInt(p), qi);
  }
  auto dot = text.find('.');
  if (dot != std::string::npos) {
    std::string ip = text.substr(0, dot), fp = text.substr(dot + 1);
    bool neg = !ip.empty() && ip[0] == '-';
    if (!ip.empty() && (ip[0] == '-' || ip[0] == '+')) ip = ip.substr(1);
    if (ip.empty()) ip = "0";
    if (!digits_only(ip, false) || !digits_only(fp, false))
      throw std::invalid_argument("malformed decimal '" + raw + "'");
    BigInt scale = 1;
    for (std::size_t i = 0; i < fp.size(); ++i) scale *= 10;
    Rational r(BigInt(ip) * scale + BigInt(fp), scale);
    return neg ? Rational(-r) : r;
  }
  if (!digits_only(text, true)) throw std::invalid_argument("malformed rational '" + raw + "'");
  return Rational(BigInt(text));
}

std::string to_decimal(const Rational& r, int digits) {
  BigInt num = boost::multiprecision::numerator(r);
  BigInt den = boost::multiprecision::denominator(r);
  bool neg = num < 0;
  if (neg) num = -num;
  BigInt scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  BigInt scaled = (num * scale * 2 + den) / (den * 2);  // round half up
  BigInt ip = scaled / scale, fp = scaled % scale;
  std::string f = fp.str();
  while (static_cast<int>(f.size()) < digits) f = "0" + f;
  while (!f.empty() && f.back() == '0') f.pop_back();
  std::string out = (neg && scaled != 0 ? "-" : "") + ip.str();
  if (!f.empty()) out += "." + f;
  return out;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw ArithmeticOverflow("integer overflow in addition");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw ArithmeticOverflow("integer overflow in multiplication");
  return r;
}

// ---------------------------------------------------------------- LinearTerm

LinearTerm LinearTerm::constant(std::int64_t c) {
  LinearTerm t;
  t.constant_ = c;
  return t;
}

LinearTerm LinearTerm::variable(const std::string& name, std::int64_t coef) {
  LinearTerm t;
  if (coef != 0) t.coeffs_[name] = coef;
  return t;
}

std::int64_t LinearTerm::coefficient(const std::string& var) const {
  auto it = coeffs_.find(var);
  return it == coeffs_.end() ? 0 : it->second;
}

LinearTerm LinearTerm::operator+(const LinearTerm& o) const {
  LinearTerm r = *this;
  r.constant_ = checked_add(constant_, o.constant_);
  for (const auto& [v, c] : o.coeffs_) {
    std::int64_t n = checked_add(r.coefficient(v), c);
    if (n == 0)
      r.coeffs_.erase(v);
    else
      r.coeffs_[v] = n;
  }
  return r;
}

LinearTerm LinearTerm::operator-(const LinearTerm& o) const { return *this + o.scaled(-1); }

LinearTerm LinearTerm::scaled(std::int64_t k) const {
  LinearTerm r;
  if (k == 0) return r;
  r.constant_ = checked_mul(constant_, k);
  for (const auto& [v, c] : coeffs_) r.coeffs_[v] = checked_mul(c, k);
  return r;
}

LinearTerm LinearTerm::without_constant() const {
  LinearTerm r = *this;
  r.constant_ = 0;
  return r;
}

LinearTerm LinearTerm::substitute(const std::string& var, const LinearTerm& replacement) const {
  auto it = coeffs_.find(var);
  if (it == coeffs_.end()) return *this;
  std::int64_t c = it->second;
  LinearTerm rest = *this;
  rest.coeffs_.erase(var);
  return rest + replacement.scaled(c);
}

std::int64_t LinearTerm::evaluate(const State& s) const {
  std::int64_t acc = constant_;
  for (const auto& [v, c] : coeffs_) {
    auto it = s.find(v);
    if (it == s.end()) throw std::out_of_range("unbound variable " + v);
    acc = checked_add(acc, checked_mul(c, it->second));
  }
  return acc;
}

namespace {

void append_monomial(std::string& out, std::int64_t c, const std::string& v, bool first) {
  if (first) {
    if (c == -1)
      out += "-";
    else if (c < 0)
      out += std::to_string(c) + "*";
    else if (c != 1)
      out += std::to_string(c) + "*";
  } else {
    out += c < 0 ? " - " : " + ";
    std::int64_t a = c < 0 ? -c : c;
    if (a != 1) out += std::to_string(a) + "*";
  }
  out += v;
}

}  // namespace

std::string LinearTerm::to_string() const {
  std::string out;
  bool first = true;
  for (const auto& [v, c] : coeffs_) {
    append_monomial(out, c, v, first);
    first = false;
  }
  if (first) return std::to_string(constant_);
  if (constant_ > 0) out += " + " + std::to_string(constant_);
  if (constant_ < 0) out += " - " + std::to_string(-constant_);
  return out;
}

// ---------------------------------------------------------------- Formula

struct Formula::Node {
  Kind kind;
  std::string var;
  LinearTerm term;
  Rel rel = Rel::Le;
  std::vector<Formula> kids;
  std::string text;
  std::size_t size = 1;
};

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

std::string atom_text(const LinearTerm& t, Rel rel) {
  // t = V + c; print as "V op -c" with the leading coefficient positive where possible.
  LinearTerm v = t.without_constant();
  std::int64_t c = t.constant_part();
  if (rel == Rel::Le) {
    if (v.coefficients().begin()->second > 0) return v.to_string() + " <= " + std::to_string(-c);
    return (-v).to_string() + " >= " + std::to_string(c);
  }
  return v.to_string() + (rel == Rel::Eq ? " = " : " != ") + std::to_string(-c);
}

bool needs_parens(const Formula& child, Formula::Kind parent) {
  auto k = child.kind();
  return (parent == Formula::Kind::And && k == Formula::Kind::Or) ||
         (parent == Formula::Kind::Or && k == Formula::Kind::And);
}

}  // namespace

Formula Formula::make_node(Kind kind, std::string var, LinearTerm term, Rel rel,
                           std::vector<Formula> kids) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->var = std::move(var);
  n->term = std::move(term);
  n->rel = rel;
  n->kids = std::move(kids);
  switch (kind) {
    case Kind::True: n->text = "true"; break;
    case Kind::False: n->text = "false"; break;
    case Kind::BoolVar: n->text = n->var; break;
    case Kind::NotVar: n->text = "!" + n->var; break;
    case Kind::Atom: n->text = atom_text(n->term, n->rel); break;
    case Kind::And:
    case Kind::Or: {
      const char* sep = kind == Kind::And ? " && " : " || ";
      for (std::size_t i = 0; i < n->kids.size(); ++i) {
        if (i) n->text += sep;
        const Formula& k = n->kids[i];
        if (needs_parens(k, kind))
          n->text += "(" + k.to_string() + ")";
        else
          n->text += k.to_string();
        n->size += k.size();
      }
      break;
    }
  }
  return Formula(std::shared_ptr<const Node>(std::move(n)));
}

Formula::Formula() : Formula(make_true()) {}

Formula Formula::make_true() {
  static const Formula t = make_node(Kind::True, "", {}, Rel::Le, {});
  return t;
}

Formula Formula::make_false() {
  static const Formula f = make_node(Kind::False, "", {}, Rel::Le, {});
  return f;
}

Formula Formula::bool_var(const std::string& name) {
  return make_node(Kind::BoolVar, name, {}, Rel::Le, {});
}

Formula Formula::atom(const LinearTerm& term, Rel rel) {
  if (term.is_constant()) {
    std::int64_t c = term.constant_part();
    switch (rel) {
      case Rel::Le: return constant(c <= 0);
      case Rel::Eq: return constant(c == 0);
      case Rel::Ne: return constant(c != 0);
    }
  }
  std::int64_t g = 0;
  for (const auto& [v, c] : term.coefficients()) g = std::gcd(g, c < 0 ? -c : c);
  std::int64_t c = term.constant_part();
  LinearTerm vars;
  std::int64_t sign = 1;
  if (rel != Rel::Le && term.coefficients().begin()->second < 0) sign = -1;
  for (const auto& [v, k] : term.coefficients())
    vars = vars + LinearTerm::variable(v, sign * (k / g));
  std::int64_t nc;
  if (rel == Rel::Le) {
    // V*g + c <= 0  <=>  V <= floor(-c/g)  <=>  V + ceil(c/g) <= 0
    nc = ceil_div(c, g);
  } else {
    if (c % g != 0) return constant(rel == Rel::Ne);
    nc = sign * (c / g);
  }
  return make_node(Kind::Atom, "", vars + LinearTerm::constant(nc), rel, {});
}

Formula Formula::compare(const LinearTerm& lhs, CmpOp op, const LinearTerm& rhs) {
  LinearTerm d = lhs - rhs;
  switch (op) {
    case CmpOp::Lt: return atom(d + LinearTerm::constant(1), Rel::Le);
    case CmpOp::Le: return atom(d, Rel::Le);
    case CmpOp::Eq: return atom(d, Rel::Eq);
    case CmpOp::Ne: return atom(d, Rel::Ne);
    case CmpOp::Ge: return atom(-d, Rel::Le);
    case CmpOp::Gt: return atom(-d + LinearTerm::constant(1), Rel::Le);
  }
  throw std::logic_error("bad comparison");
}

namespace {

std::vector<Formula> flatten(std::vector<Formula> parts, Formula::Kind kind) {
  std::vector<Formula> out;
  for (auto& p : parts) {
    if (p.kind() == kind) {
      for (const auto& k : p.children()) out.push_back(k);
    } else {
      out.push_back(std::move(p));
    }
  }
  return out;
}

}  // namespace

Formula Formula::conjunction(std::vector<Formula> parts) {
  parts = flatten(std::move(parts), Kind::And);
  std::vector<Formula> kept;
  for (auto& p : parts) {
    if (p.is_false()) return make_false();
    if (!p.is_true()) kept.push_back(std::move(p));
  }
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  std::unordered_set<std::string> texts;
  for (const auto& k : kept) texts.insert(k.to_string());
  for (const auto& k : kept)
    if (k.is_literal() && texts.count((!k).to_string())) return make_false();
  if (kept.empty()) return make_true();
  if (kept.size() == 1) return kept.front();
  return make_node(Kind::And, "", {}, Rel::Le, std::move(kept));
}

Formula Formula::disjunction(std::vector<Formula> parts) {
  parts = flatten(std::move(parts), Kind::Or);
  std::vector<Formula> kept;
  for (auto& p : parts) {
    if (p.is_true()) return make_true();
    if (!p.is_false()) kept.push_back(std::move(p));
  }
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  std::unordered_set<std::string> texts;
  for (const auto& k : kept) texts.insert(k.to_string());
  for (const auto& k : kept)
    if (k.is_literal() && texts.count((!k).to_string())) return make_true();
  if (kept.empty()) return make_false();
  if (kept.size() == 1) return kept.front();
  return make_node(Kind::Or, "", {}, Rel::Le, std::move(kept));
}

Formula Formula::implies(const Formula& a, const Formula& b) { return !a || b; }

Formula Formula::iff(const Formula& a, const Formula& b) { return (a && b) || (!a && !b); }

Formula::Kind Formula::kind() const { return node_->kind; }

bool Formula::is_literal() const {
  auto k = kind();
  return k == Kind::BoolVar || k == Kind::NotVar || k == Kind::Atom;
}

const std::string& Formula::var() const { return node_->var; }
const LinearTerm& Formula::term() const { return node_->term; }
Rel Formula::rel() const { return node_->rel; }
const std::vector<Formula>& Formula::children() const { return node_->kids; }

std::vector<Formula> Formula::conjuncts() const {
  if (is_true()) return {};
  if (kind() == Kind::And) return children();
  return {*this};
}

Formula Formula::substitute(const std::string& v, const LinearTerm& replacement) const {
  switch (kind()) {
    case Kind::True:
    case Kind::False:
    case Kind::BoolVar:
    case Kind::NotVar: return *this;
    case Kind::Atom:
      if (!term().mentions(v)) return *this;
      return atom(term().substitute(v, replacement), rel());
    case Kind::And:
    case Kind::Or: {
      std::vector<Formula> ks;
      ks.reserve(children().size());
      for (const auto& k : children()) ks.push_back(k.substitute(v, replacement));
      return kind() == Kind::And ? conjunction(std::move(ks)) : disjunction(std::move(ks));
    }
  }
  return *this;
}

Formula Formula::substitute_bool(const std::string& v, const Formula& replacement) const {
  switch (kind()) {
    case Kind::BoolVar: return var() == v ? replacement : *this;
    case Kind::NotVar: return var() == v ? !replacement : *this;
    case Kind::And:
    case Kind::Or: {
      std::vector<Formula> ks;
      for (const auto& k : children()) ks.push_back(k.substitute_bool(v, replacement));
      return kind() == Kind::And ? conjunction(std::move(ks)) : disjunction(std::move(ks));
    }
    default: return *this;
  }
}

bool Formula::mentions(const std::string& v) const {
  switch (kind()) {
    case Kind::BoolVar:
    case Kind::NotVar: return var() == v;
    case Kind::Atom: return term().mentions(v);
    case Kind::And:
    case Kind::Or:
      for (const auto& k : children())
        if (k.mentions(v)) return true;
      return false;
    default: return false;
  }
}

bool Formula::evaluate(const State& s) const {
  switch (kind()) {
    case Kind::True: return true;
    case Kind::False: return false;
    case Kind::BoolVar:
    case Kind::NotVar: {
      auto it = s.find(var());
      if (it == s.end()) throw std::out_of_range("unbound variable " + var());
      return (it->second != 0) == (kind() == Kind::BoolVar);
    }
    case Kind::Atom: {
      std::int64_t x = term().evaluate(s);
      switch (rel()) {
        case Rel::Le: return x <= 0;
        case Rel::Eq: return x == 0;
        case Rel::Ne: return x != 0;
      }
      return false;
    }
    case Kind::And:
      for (const auto& k : children())
        if (!k.evaluate(s)) return false;
      return true;
    case Kind::Or:
      for (const auto& k : children())
        if (k.evaluate(s)) return true;
      return false;
  }
  return false;
}

void Formula::collect_sorts(SortMap& out) const {
  auto put = [&](const std::string& v, Sort s) {
    auto [it, fresh] = out.emplace(v, s);
    if (!fresh && it->second != s)
      throw std::invalid_argument("variable " + v + " used with two sorts");
  };
  switch (kind()) {
    case Kind::BoolVar:
    case Kind::NotVar: put(var(), Sort::Bool); break;
    case Kind::Atom:
      for (const auto& [v, c] : term().coefficients()) put(v, Sort::Int);
      break;
    case Kind::And:
    case Kind::Or:
      for (const auto& k : children()) k.collect_sorts(out);
      break;
    default: break;
  }
}

std::set<std::string> Formula::variables() const {
  SortMap m;
  collect_sorts(m);
  std::set<std::string> out;
  for (const auto& [v, s] : m) out.insert(v);
  return out;
}

const std::string& Formula::to_string() const { return node_->text; }
std::size_t Formula::size() const { return node_->size; }

bool Formula::operator==(const Formula& o) const {
  return node_ == o.node_ || node_->text == o.node_->text;
}

std::strong_ordering Formula::operator<=>(const Formula& o) const {
  int c = node_->text.compare(o.node_->text);
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

Formula operator&&(const Formula& a, const Formula& b) { return Formula::conjunction({a, b}); }
Formula operator||(const Formula& a, const Formula& b) { return Formula::disjunction({a, b}); }

Formula operator!(const Formula& a) {
  using K = Formula::Kind;
  switch (a.kind()) {
    case K::True: return Formula::make_false();
    case K::False: return Formula::make_true();
    case K::BoolVar: return Formula::make_node(K::NotVar, a.var(), {}, Rel::Le, {});
    case K::NotVar: return Formula::bool_var(a.var());
    case K::Atom:
      switch (a.rel()) {
        case Rel::Le: return Formula::atom(-a.term() + LinearTerm::constant(1), Rel::Le);
        case Rel::Eq: return Formula::atom(a.term(), Rel::Ne);
        case Rel::Ne: return Formula::atom(a.term(), Rel::Eq);
      }
      break;
    case K::And:
    case K::Or: {
      std::vector<Formula> ks;
      for (const auto& k : a.children()) ks.push_back(!k);
      return a.kind() == K::And ? Formula::disjunction(std::move(ks))
                                : Formula::conjunction(std::move(ks));
    }
  }
  throw std::logic_error("bad formula");
}

}  // namespace pta
