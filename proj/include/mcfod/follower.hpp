#pragma once

#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "mcfod/solution.hpp"

namespace mcfod {

// Carrier reply to one leg's fee vector. hubs holds hub positions; empty
// means refusal.
struct ResponseSet {
  double value = 0;
  std::vector<int> hubs;

  bool refused() const { return hubs.empty(); }
  bool contains(int hi) const;
};

// Fees are indexed by hub position. A hub whose arc is absent for this
// carrier is never in the set.
ResponseSet first_leg_response(const Instance& inst, int r, int k, std::span<const double> p,
                               ResponseMode mode);
ResponseSet third_leg_response(const Instance& inst, int r, int k, std::span<const double> q,
                               ResponseMode mode);

struct RoutedCost {
  double cost = kInf;  // +inf when unservable
  int i = kNone;       // hub positions of the cheapest pair
  int j = kNone;
};

// C_r / rC_r: cheapest fee-plus-routing cost over the carriers' response sets.
RoutedCost leader_cost_detail(const Instance& inst, int r, const Allocation& alloc,
                              const FeeSchedule& fees, ResponseMode mode);
double leader_cost(const Instance& inst, int r, const Allocation& alloc, const FeeSchedule& fees,
                   ResponseMode mode);

// Cost of a given route under fees, legs dropped at hub endpoints.
double route_cost(const Instance& inst, int r, int hi, int hj, const FeeSchedule& fees);

struct Violation {
  int commodity = -1;  // -1 for solution-wide checks
  std::string check;
  std::string expected;
  std::string actual;
};

struct VerificationReport {
  std::vector<Violation> violations;
  double recomputed_objective = 0;

  bool ok() const { return violations.empty(); }
  nlohmann::ordered_json to_json() const;
};

// Bilevel feasibility of a leader solution. FREE is checked against the
// optimistic response under the solution's own fees; fixed variants also
// require the solution fees to equal fixed_fees when given.
VerificationReport verify_solution(const Instance& inst, const LeaderSolution& sol, Variant variant,
                                   const FeeSchedule* fixed_fees = nullptr);

}  // namespace mcfod
