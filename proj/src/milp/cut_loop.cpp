#include "mcfod/milp/cut_loop.hpp"

#include <chrono>

namespace mcfod::milp {

namespace {

double row_scale(const Row& r) {
  double s = std::max(1.0, std::abs(r.rhs));
  for (auto [v, c] : r.coefs) s = std::max(s, std::abs(c));
  return s;
}

}  // namespace

SolveOutcome solve_with_cuts(const MilpModel& model, const std::string& solver_cmd,
                             double time_limit, const CutOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };

  MilpModel work = model;
  work.clear_deferred();
  const auto& pending = model.deferred_rows();
  std::vector<char> added(pending.size(), 0);
  int cuts = 0;
  for (int round = 1;; ++round) {
    SolveOutcome out = bridge_solve(work, solver_cmd, time_limit - elapsed(), opts.bridge);
    out.cuts_added = cuts;
    out.resolve_count = round;
    out.wall_time = elapsed();
    if (!out.has_solution()) return out;

    int violated = 0;
    for (size_t d = 0; d < pending.size(); ++d) {
      if (added[d]) continue;
      if (pending[d].violation(out.assignment) > opts.violation_tol * row_scale(pending[d])) {
        work.add_row(pending[d]);
        added[d] = 1;
        ++violated;
      }
    }
    if (violated == 0) return out;
    cuts += violated;
    if (round >= opts.max_rounds) {
      SolveOutcome fail;
      fail.status = Status::SolverError;
      fail.cuts_added = cuts;
      fail.resolve_count = round;
      fail.wall_time = elapsed();
      fail.message = "cut loop hit the round cap of " + std::to_string(opts.max_rounds) + " with " +
                     std::to_string(violated) + " rows still violated";
      return fail;
    }
  }
}

}  // namespace mcfod::milp
