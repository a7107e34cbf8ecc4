#include "pta/oracle.hpp"

#include "pta/markov.hpp"
#include "pta/semantics.hpp"

#include <stdexcept>
#include <tuple>

namespace pta {

namespace {

class ValueTable {
 public:
  ValueTable(const Pcfa& p, const Specification& spec) : p_(p), spec_(spec) {}

  ProbabilityInterval value(Location l, const State& s, std::size_t k) {
    if (p_.is_accepting(l)) {
      Rational v = spec_.post.evaluate(s) ? 0 : 1;
      return {v, v};
    }
    if (p_.out(l).empty()) return {0, 0};
    if (k == 0) return {0, 1};
    auto key = std::make_tuple(l, k, s);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    ProbabilityInterval best;
    for (const auto& act : actions_at(p_, l)) {
      ProbabilityInterval v;
      if (const int* coin = std::get_if<int>(&act)) {
        for (Dir d : {Dir::L, Dir::R}) {
          auto t = p_.step(l, Label::pb(*coin, d));
          if (!t) continue;
          ProbabilityInterval sub = value(*t, s, k - 1);
          v.lower += sub.lower / 2;
          v.upper += sub.upper / 2;
        }
      } else {
        const Label& lab = std::get<Label>(act);
        auto next = interpret(lab, s);
        if (next) v = value(*p_.step(l, lab), *next, k - 1);
      }
      if (v.lower > best.lower) best.lower = v.lower;
      if (v.upper > best.upper) best.upper = v.upper;
    }
    memo_.emplace(key, best);
    return best;
  }

 private:
  const Pcfa& p_;
  const Specification& spec_;
  std::map<std::tuple<Location, std::size_t, State>, ProbabilityInterval> memo_;
};

}  // namespace

ProbabilityInterval exact_violation_probability(const Pcfa& program, const SortMap& sorts,
                                                const Specification& spec, const StateDomain& dom,
                                                std::size_t step_bound) {
  std::vector<std::string> names;
  std::vector<std::pair<std::int64_t, std::int64_t>> ranges;
  double count = 1;
  for (const auto& [v, s] : sorts) {
    std::pair<std::int64_t, std::int64_t> r{0, 0};
    if (s == Sort::Bool) {
      r = {0, 1};
    } else if (auto it = dom.ranges.find(v); it != dom.ranges.end()) {
      r = it->second;
    }
    if (r.first > r.second) throw std::invalid_argument("empty range for " + v);
    count *= static_cast<double>(r.second - r.first) + 1;
    names.push_back(v);
    ranges.push_back(r);
  }
  for (const auto& [v, r] : dom.ranges)
    if (!sorts.count(v)) throw std::invalid_argument("range for undeclared variable " + v);
  if (count > static_cast<double>(dom.limit))
    throw std::invalid_argument("state domain exceeds the limit of " + std::to_string(dom.limit));

  ValueTable table(program, spec);
  ProbabilityInterval best;
  State s;
  for (std::size_t i = 0; i < names.size(); ++i) s[names[i]] = ranges[i].first;
  while (true) {
    if (spec.pre.evaluate(s)) {
      ProbabilityInterval v = table.value(program.initial(), s, step_bound);
      if (v.lower > best.lower) best.lower = v.lower;
      if (v.upper > best.upper) best.upper = v.upper;
    }
    std::size_t i = 0;
    for (; i < names.size(); ++i) {
      if (s[names[i]] < ranges[i].second) {
        ++s[names[i]];
        break;
      }
      s[names[i]] = ranges[i].first;
    }
    if (i == names.size()) break;
  }
  return best;
}

std::pair<std::string, std::pair<std::int64_t, std::int64_t>> parse_range(const std::string& text) {
  auto eq = text.find('=');
  auto dots = text.find("..", eq == std::string::npos ? 0 : eq);
  if (eq == std::string::npos || dots == std::string::npos || eq == 0)
    throw std::invalid_argument("expected VAR=a..b, got '" + text + "'");
  try {
    std::size_t used = 0;
    std::string lo = text.substr(eq + 1, dots - eq - 1), hi = text.substr(dots + 2);
    std::int64_t a = std::stoll(lo, &used);
    if (used != lo.size()) throw std::invalid_argument("");
    std::int64_t b = std::stoll(hi, &used);
    if (used != hi.size()) throw std::invalid_argument("");
    if (a > b) throw std::invalid_argument("");
    return {text.substr(0, eq), {a, b}};
  } catch (const std::exception&) {
    throw std::invalid_argument("expected VAR=a..b with a <= b, got '" + text + "'");
  }
}

}  // namespace pta
