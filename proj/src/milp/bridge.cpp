#include "mcfod/milp/bridge.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <charconv>
#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "mcfod/instance_io.hpp"

namespace mcfod::milp {

std::string to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "OPTIMAL";
    case Status::Feasible: return "FEASIBLE";
    case Status::Infeasible: return "INFEASIBLE";
    case Status::Timeout: return "TIMEOUT";
    case Status::SolverError: return "SOLVER_ERROR";
  }
  return "?";
}

namespace {

std::optional<double> parse_double(const std::string& s) {
  double v = 0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  if (b != e && *b == '+') ++b;
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e) {
    // from_chars rejects "inf"/"nan" spellings some solvers print.
    std::string l = s;
    for (auto& c : l) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (l == "inf" || l == "+inf" || l == "infinity") return kInf;
    if (l == "-inf" || l == "-infinity") return -kInf;
    return std::nullopt;
  }
  return v;
}

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "'\\''";
    else out += c;
  }
  return out + "'";
}

std::string substitute(std::string tmpl, const std::string& key, const std::string& value) {
  for (size_t pos = tmpl.find(key); pos != std::string::npos; pos = tmpl.find(key, pos + value.size()))
    tmpl.replace(pos, key.size(), value);
  return tmpl;
}

std::string tail(const std::filesystem::path& p, size_t max_bytes = 2000) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return "";
  std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return s.size() > max_bytes ? s.substr(s.size() - max_bytes) : s;
}

}  // namespace

SolutionFile parse_solution_text(const std::string& text) {
  SolutionFile sol;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    const bool was_first = first;
    first = false;
    std::string head = lower(tok[0]);
    if (!head.empty() && head.back() == ':') head.pop_back();
    if (head == "status" && tok.size() == 2) {
      sol.status = upper(tok[1]);
      first = was_first;  // a status line does not decide the dialect
      continue;
    }
    if ((head == "objective" || head == "obj") && tok.size() == 2) {
      auto v = parse_double(tok[1]);
      if (!v) throw ParseError("solution line " + std::to_string(lineno) + ": bad objective '" + tok[1] + "'");
      sol.objective = *v;
      continue;
    }
    if (was_first && tok.size() == 1) {
      auto v = parse_double(tok[0]);
      if (!v) throw ParseError("solution line " + std::to_string(lineno) + ": expected an objective value");
      sol.objective = *v;
      continue;
    }
    if (tok.size() != 2)
      throw ParseError("solution line " + std::to_string(lineno) + ": expected '<name> <value>'");
    auto v = parse_double(tok[1]);
    if (!v) throw ParseError("solution line " + std::to_string(lineno) + ": bad value '" + tok[1] + "'");
    sol.values.emplace_back(tok[0], *v);
  }
  return sol;
}

SolveOutcome bridge_solve(const MilpModel& model, const std::string& solver_cmd, double time_limit,
                          const BridgeOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  SolveOutcome out;
  auto finish = [&](SolveOutcome o) {
    o.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.resolve_count = std::max(o.resolve_count, 1);
    return o;
  };
  if (!(time_limit > 0)) {
    out.status = Status::Timeout;
    out.message = "time limit exhausted before the solve started";
    return finish(out);
  }
  if (solver_cmd.find("{mps}") == std::string::npos || solver_cmd.find("{sol}") == std::string::npos)
    throw SolverError("solver command must contain {mps} and {sol}: " + solver_cmd);

  const char* tmp = std::getenv("TMPDIR");
  std::string tmpl = std::string(tmp && *tmp ? tmp : "/tmp") + "/mcfod-XXXXXX";
  std::vector<char> buf(tmpl.begin(), tmpl.end());
  buf.push_back('\0');
  if (!mkdtemp(buf.data())) throw SolverError("mkdtemp failed for " + tmpl);
  const std::filesystem::path dir(buf.data());
  struct Cleanup {
    std::filesystem::path dir;
    bool keep;
    ~Cleanup() {
      std::error_code ec;
      if (!keep) std::filesystem::remove_all(dir, ec);
    }
  } cleanup{dir, opts.keep_files};
  if (opts.keep_files) out.workdir = dir;

  const auto mps = dir / "model.mps", sol = dir / "model.sol", log = dir / "solver.log";
  write_text(mps, emit_mps(model, opts.mps));
  std::string cmd = substitute(solver_cmd, "{mps}", quote(mps.string()));
  cmd = substitute(cmd, "{sol}", quote(sol.string()));
  cmd = substitute(cmd, "{time}", format_number(time_limit));
  const std::string log_path = log.string();

  pid_t pid = fork();
  if (pid < 0) throw SolverError("fork failed");
  if (pid == 0) {
    setpgid(0, 0);
    int fd = open(log_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    if (fd >= 0) {
      dup2(fd, 1);
      dup2(fd, 2);
      close(fd);
    }
    execl("/bin/sh", "sh", "-c", cmd.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  setpgid(pid, pid);

  // Watchdog: kill the whole process group once the budget is gone.
  std::mutex mu;
  std::condition_variable cv;
  bool done = false, killed = false;
  std::thread watchdog([&] {
    std::unique_lock<std::mutex> lk(mu);
    auto budget = std::chrono::duration<double>(time_limit + opts.grace);
    if (!cv.wait_for(lk, budget, [&] { return done; })) {
      killed = true;
      kill(-pid, SIGKILL);
    }
  });
  int st = 0;
  while (waitpid(pid, &st, 0) < 0 && errno == EINTR) {
  }
  {
    std::lock_guard<std::mutex> lk(mu);
    done = true;
  }
  cv.notify_all();
  watchdog.join();

  if (killed) {
    out.status = Status::Timeout;
    out.message = "solver killed after exceeding the time limit";
    return finish(out);
  }
  if (!WIFEXITED(st) || WEXITSTATUS(st) != 0) {
    out.status = Status::SolverError;
    out.message = "solver command failed (" +
                  (WIFEXITED(st) ? "exit " + std::to_string(WEXITSTATUS(st)) : std::string("signal")) +
                  "): " + cmd + "\n" + tail(log);
    return finish(out);
  }
  if (!std::filesystem::exists(sol)) {
    out.status = Status::SolverError;
    out.message = "solver wrote no solution file\n" + tail(log);
    return finish(out);
  }

  SolutionFile parsed;
  try {
    parsed = parse_solution_text(read_text(sol));
  } catch (const Error& e) {
    out.status = Status::SolverError;
    out.message = e.what();
    return finish(out);
  }
  const std::string status = parsed.status.value_or(parsed.values.empty() && !parsed.objective ? "ERROR" : "OPTIMAL");
  if (status == "INFEASIBLE") {
    out.status = Status::Infeasible;
    return finish(out);
  }
  if (status == "TIMEOUT" || status == "TIME_LIMIT") {
    if (parsed.values.empty() && model.var_count() > 0) {
      out.status = Status::Timeout;
      return finish(out);
    }
    out.status = Status::Feasible;
  } else if (status == "OPTIMAL") {
    out.status = Status::Optimal;
  } else if (status == "FEASIBLE") {
    out.status = Status::Feasible;
  } else {
    out.status = Status::SolverError;
    out.message = "solver reported status " + status + "\n" + tail(log);
    return finish(out);
  }

  out.assignment.assign(model.var_count(), 0.0);
  for (const auto& [name, v] : parsed.values) {
    int idx = model.find(name);
    if (idx < 0) {
      out = SolveOutcome{};
      out.status = Status::SolverError;
      out.message = "solution names unknown variable '" + name + "'";
      return finish(out);
    }
    out.assignment[idx] = v;
  }
  out.objective = model.objective(out.assignment);
  return finish(out);
}

std::string resolve_solver_cmd(const std::string& explicit_cmd) {
  if (!explicit_cmd.empty()) return explicit_cmd;
  if (const char* env = std::getenv("MCFOD_SOLVER_CMD"); env && *env) return env;
  std::error_code ec;
  auto self = std::filesystem::read_symlink("/proc/self/exe", ec);
  if (!ec) {
    auto sibling = self.parent_path() / "mcfod-highs";
    if (std::filesystem::exists(sibling)) return quote(sibling.string()) + " {mps} {sol} {time}";
  }
#ifdef MCFOD_DEFAULT_RUNNER
  if (std::filesystem::exists(MCFOD_DEFAULT_RUNNER))
    return quote(MCFOD_DEFAULT_RUNNER) + " {mps} {sol} {time}";
#endif
  throw SolverError("no MILP solver configured: pass --solver-cmd or set MCFOD_SOLVER_CMD");
}

}  // namespace mcfod::milp
