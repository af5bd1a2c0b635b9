#include "mcfod/exact.hpp"

#include <mutex>

#include "mcfod/fees.hpp"

namespace mcfod {

namespace {

bool optimizable(const Instance& inst, int r) {
  return !inst.hub_to_hub(r) && inst.status(r) != CommodityStatus::PrunedUnprofitable;
}

// Carrier index used for a commodity endpoint; hub endpoints collapse to 0.
int carrier_at(const Instance& inst, const Allocation& a, int node) {
  return inst.is_hub(node) ? 0 : a.of(inst, node);
}

struct Evaluator {
  const Instance& inst;
  const PreprocessedCosts& costs;
  std::vector<int> active;         // optimizable commodities
  std::vector<int> oslot, dslot;   // relevant-slot of each endpoint, kNone for hubs
  std::vector<double> profit;      // r * (K*K) + k*K + l
  double base = 0;
  int K;

  Evaluator(const Instance& in, const PreprocessedCosts& c, const std::vector<int>& relevant)
      : inst(in), costs(c), K(in.carrier_count()) {
    std::vector<int> slot(in.non_hub_count(), kNone);
    for (size_t s = 0; s < relevant.size(); ++s) slot[relevant[s]] = static_cast<int>(s);
    base = hub_commodity_profit(in);
    for (int r = 0; r < in.commodity_count(); ++r) {
      if (!optimizable(in, r)) continue;
      const auto& com = in.commodity(r);
      active.push_back(r);
      oslot.push_back(in.is_hub(com.origin) ? kNone : slot[in.non_hub_pos(com.origin)]);
      dslot.push_back(in.is_hub(com.destination) ? kNone : slot[in.non_hub_pos(com.destination)]);
      for (int k = 0; k < K; ++k)
        for (int l = 0; l < K; ++l) profit.push_back(cell_profit(in, c, r, k, l));
    }
  }

  double cell(size_t a, int k, int l) const { return profit[(a * K + k) * K + l]; }

  // digits[s] is the carrier of relevant slot s.
  double value(const std::vector<int>& digits) const {
    double total = base;
    for (size_t a = 0; a < active.size(); ++a) {
      int k = oslot[a] == kNone ? 0 : digits[oslot[a]];
      int l = dslot[a] == kNone ? 0 : digits[dslot[a]];
      if (k == kNone || l == kNone) continue;
      total += cell(a, k, l);
    }
    return total;
  }

  // Upper bound with slots [0, depth) fixed.
  double bound(const std::vector<int>& digits, int depth) const {
    double total = base;
    for (size_t a = 0; a < active.size(); ++a) {
      int os = oslot[a], ds = dslot[a];
      bool ofix = os == kNone || os < depth, dfix = ds == kNone || ds < depth;
      int k = os == kNone ? 0 : (ofix ? digits[os] : kNone);
      int l = ds == kNone ? 0 : (dfix ? digits[ds] : kNone);
      if ((ofix && k == kNone) || (dfix && l == kNone)) continue;
      double best = 0;
      for (int kk = 0; kk < K; ++kk) {
        if (ofix && kk != k) continue;
        for (int ll = 0; ll < K; ++ll) {
          if (dfix && ll != l) continue;
          best = std::max(best, cell(a, kk, ll));
        }
      }
      total += best;
    }
    return total;
  }
};

Allocation to_allocation(const Instance& inst, const std::vector<int>& relevant,
                         const std::vector<int>& digits) {
  Allocation a = Allocation::none(inst);
  for (size_t s = 0; s < relevant.size(); ++s) a.assign[relevant[s]] = digits[s];
  return a;
}

}  // namespace

double cell_profit(const Instance& inst, const PreprocessedCosts& costs, int r, int k, int l) {
  if (costs.unservable(r, k, l)) return 0;
  double b = inst.commodity(r).revenue, c = costs.cost(r, k, l);
  return approx_gt(b, c) ? b - c : 0;
}

double allocation_profit(const Instance& inst, const PreprocessedCosts& costs,
                         const Allocation& alloc) {
  double total = hub_commodity_profit(inst);
  for (int r = 0; r < inst.commodity_count(); ++r) {
    if (!optimizable(inst, r)) continue;
    const auto& com = inst.commodity(r);
    int k = carrier_at(inst, alloc, com.origin), l = carrier_at(inst, alloc, com.destination);
    if (k == kNone || l == kNone) continue;
    total += cell_profit(inst, costs, r, k, l);
  }
  return total;
}

LeaderSolution solution_from_allocation(const Instance& inst, const PreprocessedCosts& costs,
                                        const Allocation& alloc, const FeeSchedule* fixed_fees) {
  LeaderSolution sol;
  sol.allocation = alloc;
  LegChoice legs = LegChoice::empty(inst);
  std::vector<int> hub_served;
  sol.objective = hub_commodity_profit(inst, &hub_served);
  for (int r : hub_served) {
    const auto& com = inst.commodity(r);
    sol.route[r] = {com.origin, com.destination};
  }
  for (int r = 0; r < inst.commodity_count(); ++r) {
    if (!optimizable(inst, r)) continue;
    const auto& com = inst.commodity(r);
    int k = carrier_at(inst, alloc, com.origin), l = carrier_at(inst, alloc, com.destination);
    if (k == kNone || l == kNone) continue;
    double p = cell_profit(inst, costs, r, k, l);
    if (p <= 0) continue;
    sol.objective += p;
    int i = costs.witness_i(r, k, l), j = costs.witness_j(r, k, l);
    sol.route[r] = {inst.hubs()[i], inst.hubs()[j]};
    if (!inst.origin_is_hub(r)) legs.first[r] = Leg{i, k};
    if (!inst.dest_is_hub(r)) legs.third[r] = Leg{j, l};
  }
  for (const auto& [r, hp] : sol.route) sol.served.push_back(r);
  if (costs.variant() == Variant::Free) {
    sol.fees = synthesize(inst, alloc, legs);
  } else {
    if (!fixed_fees) throw Error("exact: fixed variant needs the fixed fee schedule");
    sol.fees = *fixed_fees;
  }
  return sol;
}

std::vector<int> relevant_non_hubs(const Instance& inst) {
  std::vector<char> mark(inst.non_hub_count(), 0);
  for (int r = 0; r < inst.commodity_count(); ++r) {
    if (!optimizable(inst, r)) continue;
    const auto& com = inst.commodity(r);
    if (!inst.is_hub(com.origin)) mark[inst.non_hub_pos(com.origin)] = 1;
    if (!inst.is_hub(com.destination)) mark[inst.non_hub_pos(com.destination)] = 1;
  }
  std::vector<int> out;
  for (int i = 0; i < inst.non_hub_count(); ++i)
    if (mark[i]) out.push_back(i);
  return out;
}

LeaderSolution brute_force(const Instance& inst, const PreprocessedCosts& costs,
                           const ExactOptions& opts) {
  const std::vector<int> relevant = relevant_non_hubs(inst);
  const int m = static_cast<int>(relevant.size()), K = inst.carrier_count();
  if (m > opts.cap)
    throw Error("brute_force: " + std::to_string(m) + " relevant non-hubs exceed the cap of " +
                std::to_string(opts.cap));
  Evaluator ev(inst, costs, relevant);
  if (m == 0 || K == 0)
    return solution_from_allocation(inst, costs, Allocation::none(inst), opts.fixed_fees);

  // One shard per value of the first slot; each scans its block in
  // lexicographic order and keeps the first strict improvement.
  struct Best {
    double value = -kInf;
    std::vector<int> digits;
  };
  std::vector<Best> shard(K + 1);
  parallel_for(K + 1, [&](int s) {
    std::vector<int> d(m, kNone);
    d[0] = s - 1;
    Best& best = shard[s];
    while (true) {
      double v = ev.value(d);
      if (best.digits.empty() || approx_gt(v, best.value)) {
        best.value = v;
        best.digits = d;
      }
      int pos = m - 1;
      while (pos >= 1 && d[pos] == K - 1) d[pos--] = kNone;
      if (pos < 1) break;
      ++d[pos];
    }
  }, opts.threads);

  const Best* win = &shard[0];
  for (const auto& b : shard)
    if (approx_gt(b.value, win->value)) win = &b;
  return solution_from_allocation(inst, costs, to_allocation(inst, relevant, win->digits),
                                  opts.fixed_fees);
}

LeaderSolution branch_and_bound(const Instance& inst, const PreprocessedCosts& costs,
                                const ExactOptions& opts, BnbStats* stats) {
  const std::vector<int> relevant = relevant_non_hubs(inst);
  const int m = static_cast<int>(relevant.size()), K = inst.carrier_count();
  Evaluator ev(inst, costs, relevant);
  std::vector<int> d(m, kNone), best_d = d;
  double best = ev.value(d);
  BnbStats st;

  // Depth-first in lexicographic order; ties keep the earlier leaf.
  std::function<void(int)> dive = [&](int depth) {
    ++st.nodes;
    if (depth == m) {
      double v = ev.value(d);
      if (approx_gt(v, best)) {
        best = v;
        best_d = d;
      }
      return;
    }
    for (int c = kNone; c < K; ++c) {
      d[depth] = c;
      if (approx_ge(best, ev.bound(d, depth + 1))) {
        ++st.pruned;
        continue;
      }
      dive(depth + 1);
    }
    d[depth] = kNone;
  };
  if (m > 0 && K > 0) dive(0);
  if (stats) *stats = st;
  return solution_from_allocation(inst, costs, to_allocation(inst, relevant, best_d),
                                  opts.fixed_fees);
}

}  // namespace mcfod
