#include "pta/sexpr.hpp"
#include "pta/solver.hpp"

#include <chrono>
#include <csignal>
#include <cstring>
#include <fcntl.h>
#include <poll.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

namespace pta {

namespace {

class Process {
 public:
  Process(const std::string& path, const std::vector<std::string>& args) {
    int in[2], out[2];
    if (pipe(in) != 0 || pipe(out) != 0) throw std::runtime_error("pipe failed");
    pid_ = fork();
    if (pid_ < 0) throw std::runtime_error("fork failed");
    if (pid_ == 0) {
      dup2(in[0], 0);
      dup2(out[1], 1);
      int devnull = open("/dev/null", O_WRONLY);
      if (devnull >= 0) dup2(devnull, 2);
      close(in[0]);
      close(in[1]);
      close(out[0]);
      close(out[1]);
      std::vector<char*> argv;
      argv.push_back(const_cast<char*>(path.c_str()));
      for (const auto& a : args) argv.push_back(const_cast<char*>(a.c_str()));
      argv.push_back(nullptr);
      execvp(path.c_str(), argv.data());
      _exit(127);
    }
    close(in[0]);
    close(out[1]);
    to_ = in[1];
    from_ = out[0];
  }

  ~Process() { kill(); }

  void kill() {
    if (pid_ <= 0) return;
    close(to_);
    close(from_);
    ::kill(pid_, SIGKILL);
    waitpid(pid_, nullptr, 0);
    pid_ = -1;
  }

  bool write_all(const std::string& s) {
    std::size_t done = 0;
    while (done < s.size()) {
      ssize_t n = ::write(to_, s.data() + done, s.size() - done);
      if (n <= 0) return false;
      done += static_cast<std::size_t>(n);
    }
    return true;
  }

  // Reads one complete s-expression; nullopt on timeout or EOF.
  std::optional<smt::SExpr> read(std::chrono::steady_clock::time_point deadline) {
    while (!smt::complete_sexpr(buf_, 0)) {
      auto now = std::chrono::steady_clock::now();
      if (now >= deadline) return std::nullopt;
      int ms = static_cast<int>(
          std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count()) + 1;
      pollfd p{from_, POLLIN, 0};
      int r = poll(&p, 1, ms);
      if (r < 0 && errno == EINTR) continue;
      if (r <= 0) return std::nullopt;
      char chunk[4096];
      ssize_t n = ::read(from_, chunk, sizeof chunk);
      if (n <= 0) {
        // EOF: accept a trailing atom without delimiter
        if (!buf_.empty() && buf_.find_first_not_of(" \t\r\n") != std::string::npos) buf_ += "\n";
        if (smt::complete_sexpr(buf_, 0)) break;
        return std::nullopt;
      }
      buf_.append(chunk, static_cast<std::size_t>(n));
    }
    std::size_t pos = 0;
    smt::SExpr e = smt::parse_sexpr(buf_, pos);
    buf_.erase(0, pos);
    return e;
  }

 private:
  pid_t pid_ = -1;
  int to_ = -1, from_ = -1;
  std::string buf_;
};

class SmtLibBackend : public SolverBackend {
 public:
  explicit SmtLibBackend(SmtLibConfig cfg) : cfg_(std::move(cfg)) {}

  std::string name() const override { return "smtlib(" + cfg_.path + ")"; }
  bool supports_interpolation() const override { return cfg_.interpolation; }

  SatResult check(const Formula& f, const SortMap& sorts) override {
    SatResult r;
    std::string err;
    if (!ensure_started(err)) {
      r.diagnostic = err;
      return r;
    }
    auto deadline = std::chrono::steady_clock::now() +
                    std::chrono::milliseconds(static_cast<long>(cfg_.timeout_seconds * 1000));
    std::string q = "(push 1)\n" + declarations(sorts) + "(assert " + smt::to_smtlib(f) +
                    ")\n(check-sat)\n";
    if (!proc_->write_all(q)) return fail("write to solver failed");
    auto ans = proc_->read(deadline);
    if (!ans) return fail("solver timeout or exit");
    if (!ans->is_atom) return fail("solver error: " + smt::to_string(*ans));
    if (ans->atom == "unsat") {
      r.status = SatStatus::Unsat;
    } else if (ans->atom == "sat") {
      r.status = SatStatus::Sat;
      if (!sorts.empty()) {
        std::string names;
        for (const auto& [v, s] : sorts) names += " " + smt::quote_symbol(v);
        if (!proc_->write_all("(get-value (" + names + "))\n")) return fail("write failed");
        auto vals = proc_->read(deadline);
        if (!vals || vals->is_atom) return fail("bad get-value response");
        try {
          for (const auto& pair : vals->list) {
            if (pair.is_atom || pair.list.size() != 2 || !pair.list[0].is_atom)
              return fail("bad get-value entry");
            r.model[pair.list[0].atom] = smt::value_from_sexpr(pair.list[1]);
          }
        } catch (const std::exception& e) {
          return fail(std::string("bad model value: ") + e.what());
        }
      }
    } else {
      r.diagnostic = "solver answered " + ans->atom;
    }
    if (!proc_->write_all("(pop 1)\n")) return fail("write failed");
    return r;
  }

  std::optional<std::vector<Formula>> interpolants(const std::vector<Formula>& parts,
                                                   const SortMap& sorts) override {
    std::string err;
    if (!cfg_.interpolation || !ensure_started(err) || !interpolation_ok_) return std::nullopt;
    auto deadline = std::chrono::steady_clock::now() +
                    std::chrono::milliseconds(static_cast<long>(cfg_.timeout_seconds * 1000));
    std::string q = "(push 1)\n" + declarations(sorts);
    std::string names;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      std::string n = "IP_" + std::to_string(i);
      q += "(assert (! " + smt::to_smtlib(parts[i]) + " :named " + n + "))\n";
      names += " " + n;
    }
    q += "(check-sat)\n";
    if (!proc_->write_all(q)) return restart_none();
    auto ans = proc_->read(deadline);
    if (!ans || !ans->is_atom || ans->atom != "unsat") {
      if (!ans) return restart_none();
      proc_->write_all("(pop 1)\n");
      return std::nullopt;
    }
    if (!proc_->write_all("(get-interpolants" + names + ")\n")) return restart_none();
    auto res = proc_->read(deadline);
    if (!res) return restart_none();
    proc_->write_all("(pop 1)\n");
    if (res->is_atom) return std::nullopt;
    std::vector<Formula> out;
    try {
      for (const auto& e : res->list) out.push_back(smt::formula_from_sexpr(e, sorts));
    } catch (const std::exception&) {
      return std::nullopt;
    }
    return out;
  }

 private:
  std::optional<std::vector<Formula>> restart_none() {
    proc_.reset();
    return std::nullopt;
  }

  SatResult fail(const std::string& why) {
    proc_.reset();  // the session state is unknown; start over next time
    SatResult r;
    r.diagnostic = name() + ": " + why;
    return r;
  }

  static std::string declarations(const SortMap& sorts) {
    std::string d;
    for (const auto& [v, s] : sorts)
      d += "(declare-fun " + smt::quote_symbol(v) + " () " + (s == Sort::Int ? "Int" : "Bool") +
           ")\n";
    return d;
  }

  bool ensure_started(std::string& err) {
    if (proc_) return true;
    try {
      proc_ = std::make_unique<Process>(cfg_.path, cfg_.args);
    } catch (const std::exception& e) {
      err = e.what();
      return false;
    }
    std::string init = "(set-option :print-success false)\n(set-option :produce-models true)\n";
    // Probe interpolation support: an echo marks the end of the option's response.
    if (cfg_.interpolation) init += "(set-option :produce-interpolants true)\n(echo \"pta-sync\")\n";
    init += "(set-logic QF_LIA)\n";
    if (!proc_->write_all(init)) {
      proc_.reset();
      err = "cannot start solver '" + cfg_.path + "'";
      return false;
    }
    if (cfg_.interpolation) {
      interpolation_ok_ = true;
      auto deadline = std::chrono::steady_clock::now() +
                      std::chrono::milliseconds(static_cast<long>(cfg_.timeout_seconds * 1000));
      while (true) {
        auto ans = proc_->read(deadline);
        if (!ans) {
          proc_.reset();
          err = "solver '" + cfg_.path + "' did not answer";
          return false;
        }
        if (ans->is_atom && ans->atom.find("pta-sync") != std::string::npos) break;
        if (!ans->is_atom || ans->atom != "success") interpolation_ok_ = false;
      }
    }
    return true;
  }

  SmtLibConfig cfg_;
  std::unique_ptr<Process> proc_;
  bool interpolation_ok_ = false;
};

}  // namespace

std::unique_ptr<SolverBackend> make_smtlib_backend(const SmtLibConfig& config) {
  signal(SIGPIPE, SIG_IGN);
  return std::make_unique<SmtLibBackend>(config);
}

}  // namespace pta
