#include "mcfod/milp/extract.hpp"

#include "mcfod/fees.hpp"

namespace mcfod::milp {

LeaderSolution extract(const MilpModel& model, const SolveOutcome& outcome, const Instance& inst,
                       Variant variant, const FeeSchedule* fixed_fees) {
  if (!outcome.has_solution()) throw Error("extract: outcome " + to_string(outcome.status) + " has no solution");
  const auto& vars = model.variables();
  const auto& x = outcome.assignment;
  if (x.size() != vars.size()) throw Error("extract: assignment does not match the model");

  const int R = inst.commodity_count();
  LeaderSolution sol;
  sol.allocation = Allocation::none(inst);
  std::vector<int> s_var(R, -1);
  std::vector<std::vector<int>> route_vars(R);
  for (size_t v = 0; v < vars.size(); ++v) {
    const auto& var = vars[v];
    if (var.type == VarType::Binary && std::abs(x[v] - std::round(x[v])) > kIntTol)
      throw Error("extract: binary " + var.name + " is fractional (" + format_number(x[v]) + ")");
    switch (var.key.fam) {
      case Family::A:
        if (x[v] > 0.5) {
          int& slot = sol.allocation.assign[inst.non_hub_pos(var.key.i)];
          if (slot != kNone) throw Error("extract: node " + std::to_string(var.key.i) + " has two carriers");
          slot = var.key.k;
        }
        break;
      case Family::S: s_var[var.key.r] = static_cast<int>(v); break;
      case Family::X:
      case Family::PI: route_vars[var.key.r].push_back(static_cast<int>(v)); break;
      default: break;
    }
  }

  LegChoice legs = LegChoice::empty(inst);
  for (int r = 0; r < R; ++r) {
    const auto& com = inst.commodity(r);
    if (s_var[r] < 0) {
      if (!inst.hub_to_hub(r) || inst.status(r) == CommodityStatus::PrunedUnprofitable) continue;
      const int o = inst.hub_pos(com.origin), d = inst.hub_pos(com.destination);
      if (approx_gt(com.revenue, inst.leader_cost(r, o, d))) sol.route[r] = {com.origin, com.destination};
      continue;
    }
    if (x[s_var[r]] < 0.5) continue;
    int best = -1;
    for (int v : route_vars[r])
      if (best < 0 || x[v] > x[best]) best = v;
    if (best < 0 || x[best] < kIntTol)
      throw Error("extract: commodity " + std::to_string(r + 1) + " is served without a route");
    const VarKey& key = vars[best].key;
    sol.route[r] = {inst.hubs()[key.i], inst.hubs()[key.j]};
    if (!inst.origin_is_hub(r)) {
      int k = sol.allocation.of(inst, com.origin);
      if (k == kNone) throw Error("extract: commodity " + std::to_string(r + 1) + " served with unallocated origin");
      legs.first[r] = Leg{key.i, k};
    }
    if (!inst.dest_is_hub(r)) {
      int l = sol.allocation.of(inst, com.destination);
      if (l == kNone) throw Error("extract: commodity " + std::to_string(r + 1) + " served with unallocated destination");
      legs.third[r] = Leg{key.j, l};
    }
  }
  for (const auto& [r, hp] : sol.route) sol.served.push_back(r);

  if (variant == Variant::Free) {
    sol.fees = synthesize(inst, sol.allocation, legs);
  } else {
    if (!fixed_fees) throw Error("extract: fixed variant needs the fixed fee schedule");
    sol.fees = *fixed_fees;
  }
  double total = 0;
  for (const auto& [r, hp] : sol.route)
    total += inst.commodity(r).revenue - route_cost(inst, r, inst.hub_pos(hp.i), inst.hub_pos(hp.j), sol.fees);
  sol.objective = total;
  return sol;
}

}  // namespace mcfod::milp
