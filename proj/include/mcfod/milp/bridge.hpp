#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mcfod/milp/model.hpp"
#include "mcfod/milp/mps.hpp"

namespace mcfod::milp {

enum class Status { Optimal, Feasible, Infeasible, Timeout, SolverError };
std::string to_string(Status s);

struct SolveOutcome {
  Status status = Status::SolverError;
  double objective = 0;            // recomputed from the assignment, constant included
  std::vector<double> assignment;  // by variable index; empty unless OPTIMAL/FEASIBLE
  int cuts_added = 0;
  int resolve_count = 0;
  double wall_time = 0;            // seconds
  std::string message;             // diagnostics for failures
  std::filesystem::path workdir;   // kept artifacts, when requested

  bool has_solution() const { return status == Status::Optimal || status == Status::Feasible; }
};

// Solution file grammar (one item per line, '#' starts a comment):
//   status <OPTIMAL|FEASIBLE|INFEASIBLE|TIMEOUT|ERROR>   optional
//   objective <value>   or a lone number on the first line   optional
//   <variable name> <value>                              any number
// Variables left out are 0.
struct SolutionFile {
  std::optional<std::string> status;
  std::optional<double> objective;
  std::vector<std::pair<std::string, double>> values;
};
SolutionFile parse_solution_text(const std::string& text);

struct BridgeOptions {
  bool keep_files = false;
  MpsOptions mps;
  // Extra seconds granted past time_limit before the process is killed.
  double grace = 5.0;
};

// Writes the MPS file, runs the command template ({mps}, {sol}, {time}
// placeholders) through /bin/sh and reads the solution file back.
SolveOutcome bridge_solve(const MilpModel& model, const std::string& solver_cmd, double time_limit,
                          const BridgeOptions& opts = {});

// Explicit command, else MCFOD_SOLVER_CMD, else the bundled mcfod-highs
// runner. Throws SolverError when nothing is available.
std::string resolve_solver_cmd(const std::string& explicit_cmd = "");

}  // namespace mcfod::milp
