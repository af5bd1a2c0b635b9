#pragma once

#include "mcfod/milp/model.hpp"
#include "mcfod/preprocess.hpp"

namespace mcfod::milp {

struct BuildOptions {
  // EF/IF: big-M leg-cost rows, or the disaggregated rows without M.
  bool big_m = true;
  // EF/IF: withhold the leg-cost rows for the cut loop.
  bool defer_cuts = false;
  // IP: also drop pi cells with b - cost <= 0 (unservable cells always go).
  bool prune_ip = false;
  // EP FREE: add the x + a + a <= 2 optimality cuts.
  bool ep_strengthen = true;
};

// Commodities that get decision variables under a formulation.
bool in_model(const Instance& inst, int r, Formulation f);

// fees is required for the fixed variants. For IP, costs may be passed in
// (their variant must match) or are computed here.
MilpModel build(const Instance& inst, Formulation f, Variant v, const BuildOptions& opts = {},
                const FeeSchedule* fees = nullptr, const PreprocessedCosts* costs = nullptr);

struct IpCounts {
  long long variables = 0;
  long long rows = 0;
};
// |R| + |V\H||K| + |R||K|^2 - pruned pi, and |V\H| + |R| + origin + destination links.
IpCounts ip_closed_form(const Instance& inst, long long pruned_pi);

}  // namespace mcfod::milp
