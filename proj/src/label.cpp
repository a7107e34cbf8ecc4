#include "pta/label.hpp"

#include <algorithm>
#include <functional>

namespace pta {

struct Label::Data {
  LabelKind kind;
  std::string var;
  bool bool_assign = false;
  LinearTerm int_rhs;
  Formula formula;  // bool rhs or assume condition
  int id = 0;
  Dir dir = Dir::L;
  std::string text;
  std::size_t hash = 0;
};

Label Label::make(std::shared_ptr<Data> d) {
  d->hash = std::hash<std::string>{}(d->text) ^ (static_cast<std::size_t>(d->kind) << 1);
  return Label(std::move(d));
}

Label Label::assign(const std::string& var, const LinearTerm& rhs) {
  auto d = std::make_shared<Data>();
  d->kind = LabelKind::Assign;
  d->var = var;
  d->int_rhs = rhs;
  d->text = var + " := " + rhs.to_string();
  return make(std::move(d));
}

Label Label::assign_bool(const std::string& var, const Formula& rhs) {
  auto d = std::make_shared<Data>();
  d->kind = LabelKind::Assign;
  d->var = var;
  d->bool_assign = true;
  d->formula = rhs;
  d->text = var + " := " + rhs.to_string();
  return make(std::move(d));
}

Label Label::assume(const Formula& cond) {
  auto d = std::make_shared<Data>();
  d->kind = LabelKind::Assume;
  d->formula = cond;
  d->text = "assume " + cond.to_string();
  return make(std::move(d));
}

Label Label::skip() {
  static const Label s = [] {
    auto d = std::make_shared<Data>();
    d->kind = LabelKind::Skip;
    d->text = "skip";
    return make(std::move(d));
  }();
  return s;
}

Label Label::pb(int id, Dir dir) {
  auto d = std::make_shared<Data>();
  d->kind = LabelKind::Pb;
  d->id = id;
  d->dir = dir;
  d->text = "Pb(" + std::to_string(id) + (dir == Dir::L ? ",L)" : ",R)");
  return make(std::move(d));
}

Label Label::nd(int tag) {
  auto d = std::make_shared<Data>();
  d->kind = LabelKind::Nd;
  d->id = tag;
  d->text = "Nd(" + std::to_string(tag) + ")";
  return make(std::move(d));
}

LabelKind Label::kind() const { return d_->kind; }
const std::string& Label::var() const { return d_->var; }
bool Label::is_bool_assign() const { return d_->bool_assign; }
const LinearTerm& Label::int_rhs() const { return d_->int_rhs; }
const Formula& Label::bool_rhs() const { return d_->formula; }
const Formula& Label::cond() const { return d_->formula; }
int Label::id() const { return d_->id; }
Dir Label::dir() const { return d_->dir; }

Label Label::partner() const {
  if (kind() != LabelKind::Pb) throw std::logic_error("partner of a non-probabilistic label");
  return pb(id(), dir() == Dir::L ? Dir::R : Dir::L);
}

const std::string& Label::to_string() const { return d_->text; }

bool Label::operator==(const Label& o) const {
  return d_ == o.d_ || (d_->kind == o.d_->kind && d_->text == o.d_->text);
}

std::strong_ordering Label::operator<=>(const Label& o) const {
  if (d_ == o.d_) return std::strong_ordering::equal;
  if (auto c = d_->kind <=> o.d_->kind; c != 0) return c;
  if (auto c = d_->id <=> o.d_->id; c != 0) return c;
  if (auto c = d_->dir <=> o.d_->dir; c != 0) return c;
  int c = d_->text.compare(o.d_->text);
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

std::size_t Label::hash() const { return d_->hash; }

std::string to_string(const Trace& t) {
  std::string out = "[";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ", ";
    out += t[i].to_string();
  }
  return out + "]";
}

bool trace_less(const Trace& a, const Trace& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace pta
