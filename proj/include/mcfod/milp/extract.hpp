#pragma once

#include "mcfod/follower.hpp"
#include "mcfod/milp/bridge.hpp"
#include "mcfod/preprocess.hpp"

namespace mcfod::milp {

inline constexpr double kIntTol = 1e-6;

// Decodes a, s and the route (x, or the pi witness) from a solved model.
// FREE fees are synthesized from the decoded legs; fixed variants take
// fixed_fees. The objective is recomputed from the decoded solution.
LeaderSolution extract(const MilpModel& model, const SolveOutcome& outcome, const Instance& inst,
                       Variant variant, const FeeSchedule* fixed_fees = nullptr);

}  // namespace mcfod::milp
