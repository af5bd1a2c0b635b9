#pragma once

#include <optional>

#include "mcfod/milp/cut_loop.hpp"
#include "mcfod/milp/extract.hpp"
#include "mcfod/milp/formulations.hpp"

namespace mcfod::milp {

struct MilpRunOptions {
  Formulation formulation = Formulation::IP;
  Variant variant = Variant::Free;
  BuildOptions build;
  std::string solver_cmd;  // empty: resolve_solver_cmd()
  double time_limit = 600;
  bool keep_files = false;
};

struct MilpRun {
  SolveOutcome outcome;
  std::optional<LeaderSolution> solution;
  VerificationReport report;
  double build_seconds = 0;
  double solve_seconds = 0;
  int variables = 0;
  int rows = 0;
  int deferred = 0;
  std::string error;  // build or decode failure

  bool verified() const { return solution.has_value() && report.ok(); }
};

// Build, solve through the cut loop, extract and verify. Never throws for
// solver-side problems; they land in outcome/error.
MilpRun solve_milp(const Instance& inst, const MilpRunOptions& opts,
                   const FeeSchedule* fees = nullptr, const PreprocessedCosts* costs = nullptr);

}  // namespace mcfod::milp
