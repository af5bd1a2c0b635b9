#pragma once

#include "mcfod/milp/bridge.hpp"

namespace mcfod::milp {

struct CutOptions {
  int max_rounds = 100;
  // Relative to max(1, |rhs|, max |coef|); matches solver feasibility
  // tolerances rather than the money tolerance.
  double violation_tol = 1e-6;
  BridgeOptions bridge;
};

// Solve, add every violated deferred row, re-solve until none is violated.
// A model without deferred rows is solved once.
SolveOutcome solve_with_cuts(const MilpModel& model, const std::string& solver_cmd,
                             double time_limit, const CutOptions& opts = {});

}  // namespace mcfod::milp
