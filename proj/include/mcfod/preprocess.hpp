#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mcfod/solution.hpp"

namespace mcfod {

// C / Ĉ / C̃ over (commodity, origin carrier, destination carrier). The full
// (k,l) grid is stored even when an endpoint is a hub.
class PreprocessedCosts {
 public:
  static constexpr double kUnservable = kInf;

  PreprocessedCosts() = default;
  PreprocessedCosts(Variant v, int commodities, int carriers);

  Variant variant() const { return variant_; }
  int commodity_count() const { return R_; }
  int carrier_count() const { return K_; }

  double cost(int r, int k, int l) const { return cost_[idx(r, k, l)]; }
  bool unservable(int r, int k, int l) const { return std::isinf(cost(r, k, l)); }
  // Witness hub positions, kNone when unservable.
  int witness_i(int r, int k, int l) const { return wi_[idx(r, k, l)]; }
  int witness_j(int r, int k, int l) const { return wj_[idx(r, k, l)]; }
  double min_cost(int r) const;

  void set(int r, int k, int l, double c, int i, int j) {
    size_t t = idx(r, k, l);
    cost_[t] = c;
    wi_[t] = i;
    wj_[t] = j;
  }

 private:
  size_t idx(int r, int k, int l) const {
    return (static_cast<size_t>(r) * K_ + k) * K_ + l;
  }
  Variant variant_ = Variant::Free;
  int R_ = 0;
  int K_ = 0;
  std::vector<double> cost_;
  std::vector<int> wi_, wj_;
};

struct PruneReport {
  struct Resolved {
    int commodity;
    bool served;
    double profit;
  };
  std::vector<Resolved> resolved_hub_commodities;
  std::vector<int> removed_unprofitable;
  std::vector<int> removed_hubs;  // node ids in the input numbering
  std::map<std::string, std::pair<long long, long long>> variable_counts;

  void merge(const PruneReport& other);
  nlohmann::ordered_json to_json() const;
  // Columns: stage,commodity,action,value (commodity is 1-based, 0 = n/a).
  std::string to_csv() const;
};

// All-pairs shortest paths over the hub subgraph, per commodity. Pairs that
// stay disconnected are left at +inf unless the commodity could route
// through them, which is an error.
Instance complete_hub_network(const Instance& inst);

struct HubRemoval {
  Instance instance;
  std::vector<int> removed;  // node ids before relabelling
};
// Drops hubs that are no commodity endpoint and touch no access or
// distribution arc, then relabels nodes compactly (metadata.node_map).
HubRemoval remove_redundant_hubs(const Instance& inst);

// Moves fees and solutions between the numbering before and after
// remove_redundant_hubs. Dropped hubs get zero fees when lifting.
FeeSchedule restrict_fees(const Instance& original, const HubRemoval& removal, const FeeSchedule& fees);
FeeSchedule lift_fees(const Instance& original, const HubRemoval& removal, const FeeSchedule& fees);
LeaderSolution lift_solution(const Instance& original, const HubRemoval& removal,
                             const LeaderSolution& sol);

struct HubResolution {
  Instance instance;
  PruneReport report;
};
// Tags hub-to-hub commodities; served iff b - c_od > 0.
HubResolution resolve_hub_commodities(const Instance& inst);

// fees is required for the fixed variants and ignored for FREE.
PreprocessedCosts compute_costs(const Instance& inst, Variant variant,
                                const FeeSchedule* fees = nullptr);

// Commodities with min cost >= b are reported removed; IP pi counts filled in.
PruneReport prune_unprofitable(const PreprocessedCosts& costs, const Instance& inst);
Instance apply_prune(const Instance& inst, const PruneReport& report);

// Fixed profit carried by hub-to-hub commodities, with the served ones.
double hub_commodity_profit(const Instance& inst, std::vector<int>* served = nullptr);

// Runs fn(i) for i in [0,n) on up to hardware_concurrency threads.
void parallel_for(int n, const std::function<void(int)>& fn, int threads = 0);

}  // namespace mcfod
