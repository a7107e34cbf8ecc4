// Command-line driver: verify, check, oracle, bench.

#include "pta/cegar.hpp"
#include "pta/certificate.hpp"
#include "pta/oracle.hpp"
#include "pta/semantics.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pta;

namespace {

constexpr int kExitError = 3;

struct Settings {
  std::string solver = "builtin";
  std::vector<std::string> solver_args;
  double timeout = 10.0;
  bool interpolation = false;
  std::size_t max_iters = 500;
  std::size_t trace_budget = 10000;
  std::size_t max_rounds = 500;
};

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("config: '" + key + "' expects true or false");
}

// key = value lines; '#' starts a comment.
void load_config(const std::string& path, Settings& s) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    auto eq = line.find('=');
    auto strip = [](std::string x) {
      auto b = x.find_first_not_of(" \t\r");
      auto e = x.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : x.substr(b, e - b + 1);
    };
    if (strip(line).empty()) continue;
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(n) + ": expected key = value");
    std::string key = strip(line.substr(0, eq)), value = strip(line.substr(eq + 1));
    try {
      if (key == "solver") {
        s.solver = value;
      } else if (key == "solver_args") {
        std::istringstream w(value);
        s.solver_args.clear();
        for (std::string a; w >> a;) s.solver_args.push_back(a);
      } else if (key == "timeout") {
        s.timeout = std::stod(value);
      } else if (key == "interpolation") {
        s.interpolation = parse_bool(key, value);
      } else if (key == "max_iters") {
        s.max_iters = std::stoul(value);
      } else if (key == "trace_budget") {
        s.trace_budget = std::stoul(value);
      } else if (key == "max_rounds") {
        s.max_rounds = std::stoul(value);
      } else {
        throw std::invalid_argument("unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(path + ":" + std::to_string(n) + ": " + e.what());
    } catch (const std::out_of_range&) {
      throw std::invalid_argument(path + ":" + std::to_string(n) + ": value out of range");
    }
  }
}

Solver make_solver(const Settings& s) {
  if (s.solver == "builtin") return Solver(make_builtin_backend());
  SmtLibConfig c;
  c.path = s.solver;
  if (!s.solver_args.empty()) c.args = s.solver_args;
  c.timeout_seconds = s.timeout;
  c.interpolation = s.interpolation;
  return Solver(make_smtlib_backend(c));
}

std::string fraction(const Rational& r) { return to_string(r) + " (" + to_decimal(r, 6) + ")"; }

int exit_code(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::Sat: return 0;
    case Verdict::Kind::Unsat: return 1;
    default: return 2;
  }
}

json report_json(const std::string& name, const Verdict& v, double ms, const SolverStats& st) {
  json j;
  if (!name.empty()) j["file"] = name;
  j["verdict"] = to_string(v.kind);
  Rational b = v.kind == Verdict::Kind::Unsat ? v.counterexample->total_vp : v.upper_bound;
  j["bound_num"] = numerator(b).str();
  j["bound_den"] = denominator(b).str();
  j["iterations"] = v.iterations;
  j["traces"] = v.traces;
  j["error_pre"] = v.counterexample ? json(v.counterexample->error_pre.to_string()) : json(nullptr);
  if (v.counterexample) {
    json ts = json::array();
    for (const auto& t : v.counterexample->traces) ts.push_back(to_string(t));
    j["counterexample"] = ts;
  }
  if (v.kind == Verdict::Kind::Inconclusive) j["reason"] = v.reason;
  j["time_ms"] = ms;
  j["solver_queries"] = st.queries;
  return j;
}

void print_report(const Verdict& v, double ms, const SolverStats& st) {
  std::cout << "result: " << to_string(v.kind) << "\n";
  switch (v.kind) {
    case Verdict::Kind::Sat: std::cout << "upper bound: " << fraction(v.upper_bound) << "\n"; break;
    case Verdict::Kind::Unsat: {
      const auto& c = *v.counterexample;
      std::cout << "violation probability: " << fraction(c.total_vp) << "\n";
      std::cout << "error precondition: " << c.error_pre.to_string() << "\n";
      std::cout << "counterexample (" << c.traces.size() << " traces):\n";
      for (const auto& t : c.traces) std::cout << "  " << to_string(weight(t)) << "  " << to_string(t) << "\n";
      break;
    }
    case Verdict::Kind::Inconclusive: std::cout << "reason: " << v.reason << "\n"; break;
  }
  std::cout << "iterations: " << v.iterations << "\n";
  std::cout << "traces: " << v.traces << "\n";
  std::cout << "solver queries: " << st.queries << "\n";
  std::cout << "time: " << static_cast<long>(ms) << " ms\n";
}

struct Run {
  Verdict verdict;
  double ms = 0;
  SolverStats stats;
};

Run run_verify(const ParsedFile& f, const Rational& beta, const Settings& s, bool refutational,
               bool verbose) {
  Solver solver = make_solver(s);
  VerifyOptions opt;
  opt.max_iterations = s.max_iters;
  opt.examine.trace_budget = s.trace_budget;
  opt.examine.max_rounds = s.max_rounds;
  Pcfa p = to_pcfa(f.program);
  VerifyLog log;
  auto t0 = std::chrono::steady_clock::now();
  Verdict v = refutational ? verify_refutational(p, f.spec, beta, solver, opt, verbose ? &log : nullptr)
                           : verify(p, f.spec, beta, solver, opt, verbose ? &log : nullptr);
  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  for (const auto& l : log) std::cerr << l << "\n";
  return {v, ms, solver.stats()};
}

Rational pick_beta(const std::string& flag, const ParsedFile& f) {
  return flag.empty() ? f.spec.beta : parse_rational(flag);
}

struct Golden {
  std::string expected;
  std::string oracle;
};

Golden read_golden(const fs::path& p) {
  Golden g;
  std::ifstream in(p);
  if (!in) throw std::runtime_error("missing golden file " + p.string());
  for (std::string line; std::getline(in, line);) {
    std::istringstream w(line);
    std::string key;
    w >> key;
    if (key == "expected") w >> g.expected;
    if (key == "oracle") std::getline(w, g.oracle);
  }
  if (g.expected.empty()) throw std::runtime_error(p.string() + ": no 'expected' line");
  return g;
}

std::string pad(std::string s, std::size_t n) {
  if (s.size() < n) s.append(n - s.size(), ' ');
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Probabilistic trace abstraction verifier"};
  app.require_subcommand(1);
  Settings settings;
  std::string config, solver_flag, beta_flag;
  std::vector<std::string> solver_args;
  double timeout = 0;
  std::optional<std::size_t> max_iters, trace_budget;
  bool json_out = false, verbose = false, refutational = false, interpolation = false;

  auto solver_opts = [&](CLI::App* c) {
    c->add_option("--config", config, "key = value configuration file");
    c->add_option("--solver", solver_flag, "SMT-LIB solver executable, or 'builtin'");
    c->add_option("--solver-arg", solver_args, "argument passed to the solver (repeatable)")
        ->allow_extra_args(false);
    c->add_flag("--interpolation", interpolation, "ask the solver for sequence interpolants");
    c->add_option("--timeout", timeout, "seconds per solver query");
  };

  std::string file, cert_file, dir;
  auto* verify_cmd = app.add_subcommand("verify", "verify a program against its specification");
  verify_cmd->add_option("file", file, "program")->required();
  verify_cmd->add_option("--beta", beta_flag, "threshold p/q (overrides @beta)");
  verify_cmd->add_flag("--refutational", refutational, "keep exact violating traces, no generalization");
  verify_cmd->add_option("--max-iters", max_iters, "iteration cap");
  verify_cmd->add_option("--trace-budget", trace_budget, "traces per examination round");
  verify_cmd->add_flag("--json", json_out, "machine-readable report");
  verify_cmd->add_flag("-v,--verbose", verbose, "progress on stderr");
  solver_opts(verify_cmd);

  auto* check_cmd = app.add_subcommand("check", "check a decomposition certificate");
  check_cmd->add_option("file", file, "program")->required();
  check_cmd->add_option("certificate", cert_file, "certificate")->required();
  check_cmd->add_option("--beta", beta_flag, "threshold p/q (overrides the certificate)");
  check_cmd->add_flag("--json", json_out, "machine-readable report");
  solver_opts(check_cmd);

  std::vector<std::string> doms;
  std::size_t steps = 64;
  auto* oracle_cmd = app.add_subcommand("oracle", "exact violation probability on a bounded domain");
  oracle_cmd->add_option("file", file, "program")->required();
  oracle_cmd->add_option("--dom", doms, "VAR=a..b (repeatable; other integers start at 0)");
  oracle_cmd->add_option("--steps", steps, "step bound");
  oracle_cmd->add_option("--beta", beta_flag, "also decide against this threshold");
  oracle_cmd->add_flag("--json", json_out, "machine-readable report");

  auto* bench_cmd = app.add_subcommand("bench", "verify every .prob file of a directory against golden verdicts");
  bench_cmd->add_option("dir", dir, "benchmark directory")->required();
  bench_cmd->add_flag("--json", json_out, "machine-readable report");
  bench_cmd->add_option("--max-iters", max_iters, "iteration cap");
  solver_opts(bench_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (!config.empty()) load_config(config, settings);
    if (!solver_flag.empty()) settings.solver = solver_flag;
    if (!solver_args.empty()) settings.solver_args = solver_args;
    if (timeout > 0) settings.timeout = timeout;
    if (interpolation) settings.interpolation = true;
    if (max_iters) settings.max_iters = *max_iters;
    if (trace_budget) settings.trace_budget = *trace_budget;

    if (*verify_cmd) {
      ParsedFile f = parse_file(file);
      Run r = run_verify(f, pick_beta(beta_flag, f), settings, refutational, verbose);
      if (json_out)
        std::cout << report_json("", r.verdict, r.ms, r.stats).dump(2) << "\n";
      else
        print_report(r.verdict, r.ms, r.stats);
      return exit_code(r.verdict.kind);
    }

    if (*check_cmd) {
      ParsedFile f = parse_file(file);
      Pcfa p = to_pcfa(f.program);
      CertificateFile cert = parse_certificate_file(cert_file, f.program.sorts(), p.alphabet());
      Rational beta = !beta_flag.empty() ? parse_rational(beta_flag) : cert.beta ? *cert.beta : f.spec.beta;
      Solver solver = make_solver(settings);
      DecompositionResult d = check_decomposition(p, f.spec, beta, cert.qs, cert.a, solver);
      if (json_out) {
        json j{{"certified", d.certified},
               {"bound_num", numerator(d.upper_bound).str()},
               {"bound_den", denominator(d.upper_bound).str()},
               {"beta", to_string(beta)}};
        if (!d.certified) j["reason"] = d.reason;
        std::cout << j.dump(2) << "\n";
      } else if (d.certified) {
        std::cout << "certified: bound " << fraction(d.upper_bound) << " <= " << to_string(beta) << "\n";
      } else {
        std::cout << "rejected: " << d.reason << "\n";
      }
      return d.certified ? 0 : 1;
    }

    if (*oracle_cmd) {
      ParsedFile f = parse_file(file);
      StateDomain dom;
      for (const auto& d : doms) {
        auto [v, r] = parse_range(d);
        dom.ranges[v] = r;
      }
      ProbabilityInterval iv =
          exact_violation_probability(to_pcfa(f.program), f.program.sorts(), f.spec, dom, steps);
      std::optional<Rational> beta;
      if (!beta_flag.empty()) beta = parse_rational(beta_flag);
      std::string decision = "undecided";
      if (beta && iv.upper <= *beta) decision = "SAT";
      if (beta && iv.lower > *beta) decision = "UNSAT";
      if (json_out) {
        json j{{"lower", to_string(iv.lower)}, {"upper", to_string(iv.upper)}};
        if (beta) j["decision"] = decision;
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << "[" << to_string(iv.lower) << ", " << to_string(iv.upper) << "]  ("
                  << to_decimal(iv.lower, 6) << " .. " << to_decimal(iv.upper, 6) << ")\n";
        if (beta) std::cout << "decision at " << to_string(*beta) << ": " << decision << "\n";
      }
      return 0;
    }

    if (*bench_cmd) {
      std::vector<fs::path> files;
      for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".prob") files.push_back(e.path());
      std::sort(files.begin(), files.end());
      if (files.empty()) throw std::runtime_error("no .prob files in " + dir);
      json rows = json::array();
      int mismatches = 0;
      if (!json_out)
        std::cout << pad("Benchmark", 22) << pad("Result", 14) << pad("#Iteration", 12)
                  << pad("Upper Bound", 16) << pad("#Traces", 9) << "Expected\n";
      for (const auto& p : files) {
        ParsedFile f = parse_file(p.string());
        Golden g = read_golden(fs::path(p).replace_extension(".golden"));
        Run r = run_verify(f, f.spec.beta, settings, false, false);
        std::string got = to_string(r.verdict.kind);
        bool ok = got == g.expected;
        if (!ok) ++mismatches;
        Rational b = r.verdict.counterexample ? r.verdict.counterexample->total_vp : r.verdict.upper_bound;
        if (json_out) {
          json j = report_json(p.filename().string(), r.verdict, r.ms, r.stats);
          j["expected"] = g.expected;
          j["match"] = ok;
          rows.push_back(j);
        } else {
          std::cout << pad(p.stem().string(), 22) << pad(got, 14)
                    << pad(std::to_string(r.verdict.iterations), 12)
                    << pad(r.verdict.kind == Verdict::Kind::Inconclusive ? "-" : to_string(b), 16)
                    << pad(std::to_string(r.verdict.traces), 9) << g.expected << (ok ? "" : "  MISMATCH")
                    << "\n";
        }
      }
      if (json_out) std::cout << rows.dump(2) << "\n";
      return mismatches == 0 ? 0 : 1;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError + 1;
  }
  return kExitError + 1;
}
