#pragma once

#include <optional>
#include <vector>

#include "mcfod/solution.hpp"

namespace mcfod {

struct Leg {
  int hub = kNone;      // hub position
  int carrier = kNone;
};

// Chosen first/third legs per commodity; absent for unserved commodities or
// hub endpoints.
struct LegChoice {
  std::vector<std::optional<Leg>> first;
  std::vector<std::optional<Leg>> third;

  static LegChoice empty(const Instance& inst) {
    return {std::vector<std::optional<Leg>>(inst.commodity_count()),
            std::vector<std::optional<Leg>>(inst.commodity_count())};
  }
};

// Pays each chosen leg exactly its carrier's reservation price and offers
// zero everywhere else.
FeeSchedule synthesize(const Instance& inst, const Allocation& alloc, const LegChoice& legs);

struct SupportSets {
  std::vector<double> P;  // ascending, deduplicated, includes 0
  std::vector<double> Q;
};
// Candidate fee values for (r, hub position). A leg that does not exist for
// r yields an empty set.
SupportSets support_sets(const Instance& inst, int r, int hi);

}  // namespace mcfod
