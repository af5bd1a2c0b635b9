#include "mcfod/fees.hpp"

namespace mcfod {

FeeSchedule synthesize(const Instance& inst, const Allocation& alloc, const LegChoice& legs) {
  FeeSchedule fees = FeeSchedule::zeros(inst);
  for (int r = 0; r < inst.commodity_count(); ++r) {
    const auto& com = inst.commodity(r);
    if (r < static_cast<int>(legs.first.size()) && legs.first[r]) {
      const Leg& leg = *legs.first[r];
      if (inst.origin_is_hub(r)) throw Error("synthesize: first leg given for hub-origin commodity " + std::to_string(r + 1));
      if (leg.carrier != alloc.of(inst, com.origin))
        throw Error("synthesize: first-leg carrier of commodity " + std::to_string(r + 1) + " differs from allocation");
      if (!inst.has_access(r, leg.carrier, leg.hub))
        throw Error("synthesize: commodity " + std::to_string(r + 1) + " has no access arc to hub " +
                    std::to_string(inst.hubs()[leg.hub]) + " for carrier " + std::to_string(leg.carrier + 1));
      fees.set_p(r, leg.hub, inst.access_raw(r, leg.carrier, leg.hub));
    }
    if (r < static_cast<int>(legs.third.size()) && legs.third[r]) {
      const Leg& leg = *legs.third[r];
      if (inst.dest_is_hub(r)) throw Error("synthesize: third leg given for hub-destination commodity " + std::to_string(r + 1));
      if (leg.carrier != alloc.of(inst, com.destination))
        throw Error("synthesize: third-leg carrier of commodity " + std::to_string(r + 1) + " differs from allocation");
      if (!inst.has_dist(r, leg.carrier, leg.hub))
        throw Error("synthesize: commodity " + std::to_string(r + 1) + " has no distribution arc from hub " +
                    std::to_string(inst.hubs()[leg.hub]) + " for carrier " + std::to_string(leg.carrier + 1));
      fees.set_q(r, leg.hub, inst.dist_raw(r, leg.carrier, leg.hub));
    }
  }
  return fees;
}

static void finish(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

SupportSets support_sets(const Instance& inst, int r, int hi) {
  SupportSets s;
  if (!inst.origin_is_hub(r)) {
    s.P.push_back(0.0);
    for (int k = 0; k < inst.carrier_count(); ++k)
      if (inst.has_access(r, k, hi)) s.P.push_back(inst.access_raw(r, k, hi));
    finish(s.P);
  }
  if (!inst.dest_is_hub(r)) {
    s.Q.push_back(0.0);
    for (int k = 0; k < inst.carrier_count(); ++k)
      if (inst.has_dist(r, k, hi)) s.Q.push_back(inst.dist_raw(r, k, hi));
    finish(s.Q);
  }
  return s;
}

}  // namespace mcfod
