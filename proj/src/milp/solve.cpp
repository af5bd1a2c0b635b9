#include "mcfod/milp/solve.hpp"

#include <chrono>

namespace mcfod::milp {

MilpRun solve_milp(const Instance& inst, const MilpRunOptions& opts, const FeeSchedule* fees,
                   const PreprocessedCosts* costs) {
  MilpRun run;
  using clock = std::chrono::steady_clock;
  auto t0 = clock::now();
  MilpModel model;
  std::string cmd;
  try {
    model = build(inst, opts.formulation, opts.variant, opts.build, fees, costs);
    cmd = resolve_solver_cmd(opts.solver_cmd);
  } catch (const Error& e) {
    run.error = e.what();
    return run;
  }
  run.build_seconds = std::chrono::duration<double>(clock::now() - t0).count();
  run.variables = model.var_count();
  run.rows = model.row_count();
  run.deferred = static_cast<int>(model.deferred_rows().size());

  CutOptions cut;
  cut.bridge.keep_files = opts.keep_files;
  try {
    run.outcome = solve_with_cuts(model, cmd, opts.time_limit, cut);
  } catch (const Error& e) {
    run.outcome.status = Status::SolverError;
    run.outcome.message = e.what();
  }
  run.solve_seconds = run.outcome.wall_time;
  if (!run.outcome.has_solution()) return run;
  try {
    run.solution = extract(model, run.outcome, inst, opts.variant, fees);
    run.report = verify_solution(inst, *run.solution, opts.variant, fees);
  } catch (const Error& e) {
    run.solution.reset();
    run.error = e.what();
  }
  return run;
}

}  // namespace mcfod::milp
