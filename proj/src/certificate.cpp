#include "pta/certificate.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace pta {

namespace {

std::string trim_ws(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

struct Block {
  bool certified = false;
  std::string name;
  int line = 0;
  std::optional<Location> init;
  std::vector<Location> accept;
  std::map<Location, Formula> lambda;
  std::vector<std::tuple<Location, Label, Location>> edges;
  Location max_loc = 0;
};

class CertParser {
 public:
  CertParser(const SortMap& sorts, const std::vector<Label>& sigma) : sorts_(sorts), sigma_(sigma) {}

  CertificateFile run(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string raw;
    std::optional<Block> cur;
    CertificateFile out;
    bool have_a = false;
    while (std::getline(in, raw)) {
      ++line_;
      std::string s = trim_ws(raw);
      if (s.empty() || s[0] == '#') continue;
      if (!cur) {
        if (s.rfind("beta", 0) == 0) {
          try {
            out.beta = parse_rational(trim_ws(s.substr(4)));
          } catch (const std::exception& e) {
            fail(e.what());
          }
          if (*out.beta < 0 || *out.beta > 1) fail("beta must lie in [0, 1]");
        } else if (s.rfind("automaton", 0) == 0) {
          std::istringstream w(s.substr(9));
          std::string kind, name;
          w >> kind >> name;
          if (kind != "Q" && kind != "A") fail("expected 'automaton Q name' or 'automaton A name'");
          if (kind == "A" && have_a) fail("more than one violating automaton");
          cur = Block{};
          cur->certified = kind == "Q";
          cur->name = name;
          cur->line = line_;
        } else {
          fail("expected 'beta' or 'automaton'");
        }
        continue;
      }
      if (s == "end") {
        if (cur->certified) {
          out.q_names.push_back(cur->name);
          out.qs.push_back(finish_q(*cur));
        } else {
          have_a = true;
          out.a_name = cur->name;
          out.a = finish_base(*cur);
        }
        cur.reset();
        continue;
      }
      block_line(*cur, s);
    }
    if (cur) fail("missing 'end'");
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, 1); }

  Location number(const std::string& s) {
    try {
      std::size_t used = 0;
      long v = std::stol(s, &used);
      if (used != s.size() || v < 0) throw std::invalid_argument("");
      return static_cast<Location>(v);
    } catch (const std::exception&) {
      fail("expected a location number, got '" + s + "'");
    }
  }

  Location see(Block& b, Location l) {
    b.max_loc = std::max(b.max_loc, l);
    return l;
  }

  std::vector<Label> labels(const std::string& text) {
    std::string t = trim_ws(text);
    if (t == "*") return sigma_;
    if (t.rfind("*", 0) == 0) {
      std::string rest = trim_ws(t.substr(1));
      if (rest.empty() || rest[0] != '\\') fail("expected '* \\ {labels}'");
      rest = trim_ws(rest.substr(1));
      if (rest.size() < 2 || rest.front() != '{' || rest.back() != '}') fail("expected '{...}' after '\\'");
      std::vector<Label> minus;
      std::string body = rest.substr(1, rest.size() - 2);
      std::size_t start = 0;
      while (start <= body.size()) {
        auto semi = body.find(';', start);
        std::string item = trim_ws(body.substr(start, semi == std::string::npos ? std::string::npos : semi - start));
        if (!item.empty()) minus.push_back(label(item));
        if (semi == std::string::npos) break;
        start = semi + 1;
      }
      std::vector<Label> out;
      for (const auto& l : sigma_)
        if (std::find(minus.begin(), minus.end(), l) == minus.end()) out.push_back(l);
      return out;
    }
    return {label(t)};
  }

  Label label(const std::string& text) {
    try {
      return parse_label(text, sorts_);
    } catch (const ParseError& e) {
      fail("bad label '" + text + "': " + e.what());
    }
  }

  void block_line(Block& b, const std::string& s) {
    if (s.rfind("init:", 0) == 0) {
      b.init = see(b, number(trim_ws(s.substr(5))));
      return;
    }
    if (s.rfind("accept:", 0) == 0) {
      std::istringstream w(s.substr(7));
      std::string n;
      while (w >> n) b.accept.push_back(see(b, number(n)));
      return;
    }
    if (s.rfind("lambda", 0) == 0) {
      auto colon = s.find(':');
      if (colon == std::string::npos) fail("expected 'lambda n: formula'");
      Location l = see(b, number(trim_ws(s.substr(6, colon - 6))));
      try {
        b.lambda[l] = parse_formula(s.substr(colon + 1), sorts_);
      } catch (const ParseError& e) {
        fail(std::string("bad proposition: ") + e.what());
      }
      return;
    }
    auto open = s.find("-[");
    auto close = s.rfind("]->");
    if (open == std::string::npos || close == std::string::npos || close < open)
      fail("expected 'src -[label]-> dst'");
    Location src = see(b, number(trim_ws(s.substr(0, open))));
    Location dst = see(b, number(trim_ws(s.substr(close + 3))));
    for (const auto& l : labels(s.substr(open + 2, close - open - 2))) b.edges.emplace_back(src, l, dst);
  }

  Pcfa finish_base(const Block& b) {
    if (!b.init) fail("automaton " + b.name + " has no 'init:' line");
    Pcfa p(b.max_loc + 1);
    p.set_initial(*b.init);
    for (auto l : b.accept) p.set_accepting(l);
    for (const auto& [s, l, t] : b.edges) p.add_transition(s, l, t);
    return p;
  }

  FloydHoareAutomaton finish_q(const Block& b) {
    FloydHoareAutomaton f{finish_base(b), {}};
    for (Location l = 0; l <= b.max_loc; ++l) {
      auto it = b.lambda.find(l);
      if (it == b.lambda.end())
        fail("automaton " + b.name + ": location " + std::to_string(l) + " has no proposition");
      f.lambda.push_back(it->second);
    }
    return f;
  }

  const SortMap& sorts_;
  const std::vector<Label>& sigma_;
  int line_ = 0;
};

void write_base(std::ostringstream& os, const Pcfa& a, const std::vector<Formula>* lambda) {
  os << "init: " << a.initial() << "\n";
  os << "accept:";
  for (auto l : a.accepting_locations()) os << " " << l;
  os << "\n";
  if (lambda)
    for (std::size_t l = 0; l < lambda->size(); ++l) os << "lambda " << l << ": " << (*lambda)[l].to_string() << "\n";
  for (const auto& t : a.transitions())
    os << t.source << " -[" << t.label.to_string() << "]-> " << t.target << "\n";
}

}  // namespace

CertificateFile parse_certificate(std::string_view text, const SortMap& sorts,
                                  const std::vector<Label>& sigma) {
  return CertParser(sorts, sigma).run(text);
}

CertificateFile parse_certificate_file(const std::string& path, const SortMap& sorts,
                                       const std::vector<Label>& sigma) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_certificate(ss.str(), sorts, sigma);
}

std::string write_certificate(const CertificateFile& cert) {
  std::ostringstream os;
  if (cert.beta) os << "beta " << to_string(*cert.beta) << "\n";
  for (std::size_t i = 0; i < cert.qs.size(); ++i) {
    os << "automaton Q " << (i < cert.q_names.size() ? cert.q_names[i] : "Q" + std::to_string(i)) << "\n";
    write_base(os, cert.qs[i].base, &cert.qs[i].lambda);
    os << "end\n";
  }
  os << "automaton A " << (cert.a_name.empty() ? "A" : cert.a_name) << "\n";
  write_base(os, cert.a, nullptr);
  os << "end\n";
  return os.str();
}

}  // namespace pta
