#pragma once

#include <cstdint>

#include "mcfod/preprocess.hpp"

namespace mcfod {

struct ExactOptions {
  int cap = 12;        // max enumerated non-hubs for brute_force
  int threads = 0;     // 0 = hardware concurrency
  // Required for the fixed variants so the returned solution carries the
  // fees it was priced with.
  const FeeSchedule* fixed_fees = nullptr;
};

// Profit of one commodity under carriers (k, l); 0 unless strictly positive.
double cell_profit(const Instance& inst, const PreprocessedCosts& costs, int r, int k, int l);

// Profit of an allocation over the preprocessed view, hub-to-hub commodities
// included.
double allocation_profit(const Instance& inst, const PreprocessedCosts& costs,
                         const Allocation& alloc);

// Serves every strictly profitable commodity along its witness route. FREE
// fees are synthesized; fixed variants copy opts.fixed_fees.
LeaderSolution solution_from_allocation(const Instance& inst, const PreprocessedCosts& costs,
                                        const Allocation& alloc,
                                        const FeeSchedule* fixed_fees = nullptr);

// Non-hubs that are an endpoint of some commodity the optimizer can affect,
// by non-hub position.
std::vector<int> relevant_non_hubs(const Instance& inst);

LeaderSolution brute_force(const Instance& inst, const PreprocessedCosts& costs,
                           const ExactOptions& opts = {});

struct BnbStats {
  std::int64_t nodes = 0;
  std::int64_t pruned = 0;
};
LeaderSolution branch_and_bound(const Instance& inst, const PreprocessedCosts& costs,
                                const ExactOptions& opts = {}, BnbStats* stats = nullptr);

}  // namespace mcfod
