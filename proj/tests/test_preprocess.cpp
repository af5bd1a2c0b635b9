#include <algorithm>
#include <atomic>
#include <cmath>

#include "doctest.h"
#include "mcfod/generator.hpp"
#include "mcfod/preprocess.hpp"
#include "test_util.hpp"

using namespace mcfod;

namespace {

constexpr double kOracleTol = 1e-9;

bool close(double a, double b) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= kOracleTol * std::max({1.0, std::abs(a), std::abs(b)});
}

// Naive carrier reply: every hub whose fee covers the price, narrowed to the
// best margin in optimistic mode.
std::vector<std::pair<int, double>> naive_leg(int h, bool relaxed,
                                              const std::function<double(int)>& price,
                                              const std::function<double(int)>& fee) {
  std::vector<std::pair<int, double>> ok;
  double best = -kInf;
  for (int i = 0; i < h; ++i) {
    double c = price(i);
    if (std::isnan(c) || fee(i) < c - kOracleTol * std::max(1.0, c)) continue;
    ok.emplace_back(i, fee(i));
    best = std::max(best, fee(i) - c);
  }
  if (relaxed) return ok;
  std::vector<std::pair<int, double>> top;
  for (auto [i, f] : ok)
    if (f - price(i) >= best - kOracleTol * std::max(1.0, f)) top.emplace_back(i, f);
  return top;
}

// Independent cost table: enumerate every hub pair explicitly.
double oracle_cost(const Instance& inst, Variant v, const FeeSchedule* fees, int r, int k, int l) {
  const int h = inst.hub_count();
  const auto& com = inst.commodity(r);
  const bool relaxed = v == Variant::FixedRelaxed;
  std::vector<std::pair<int, double>> I, J;
  if (inst.origin_is_hub(r)) {
    I = {{inst.hub_pos(com.origin), 0.0}};
  } else if (v == Variant::Free) {
    for (int i = 0; i < h; ++i)
      if (inst.has_access(r, k, i)) I.emplace_back(i, inst.access_raw(r, k, i));
  } else {
    I = naive_leg(h, relaxed, [&](int i) { return inst.access_raw(r, k, i); },
                  [&](int i) { return fees->p(r, i); });
  }
  if (inst.dest_is_hub(r)) {
    J = {{inst.hub_pos(com.destination), 0.0}};
  } else if (v == Variant::Free) {
    for (int j = 0; j < h; ++j)
      if (inst.has_dist(r, l, j)) J.emplace_back(j, inst.dist_raw(r, l, j));
  } else {
    J = naive_leg(h, relaxed, [&](int j) { return inst.dist_raw(r, l, j); },
                  [&](int j) { return fees->q(r, j); });
  }
  double best = kInf;
  for (auto [i, a] : I)
    for (auto [j, b] : J) best = std::min(best, a + inst.leader_cost(r, i, j) + b);
  return best;
}

Instance random_instance(std::uint64_t seed) {
  Rng rng(seed);
  GenParams p;
  p.seed = seed;
  p.carriers = 1 + static_cast<int>(rng.next() % 3);
  const int n = 5 + static_cast<int>(rng.next() % 5);
  p.tau = (1 + static_cast<int>(rng.next() % 3)) / static_cast<double>(n);
  Instance inst = generate(n, p, 0.4);
  // Knock out a few arcs so absent prices are exercised.
  for (int r = 0; r < inst.commodity_count(); ++r)
    for (int k = 0; k < inst.carrier_count(); ++k)
      for (int i = 0; i < inst.hub_count(); ++i) {
        if (rng.unit() < 0.2) inst.clear_access_price(r, k, i);
        if (rng.unit() < 0.2) inst.clear_dist_price(r, k, i);
      }
  return inst;
}

// Three hubs in a line (1-2-3) plus non-hub 4; c_12 = c_23 = 1 only.
Instance chain() {
  Instance inst(4, {1, 2, 3}, 1, {{4, 1, 1, 50}, {1, 3, 1, 50}});
  for (int r = 0; r < 2; ++r) {
    for (int i = 0; i < 3; ++i) inst.set_leader_cost(r, i, i, 0);
    inst.set_leader_cost(r, 0, 1, 1);
    inst.set_leader_cost(r, 1, 0, 1);
    inst.set_leader_cost(r, 1, 2, 1);
    inst.set_leader_cost(r, 2, 1, 1);
  }
  inst.set_access_price(0, 0, 2, 5);
  return inst;
}

}  // namespace

TEST_CASE("FREE cost table on Example 1") {
  Instance inst = test::example1();
  auto pc = compute_costs(inst, Variant::Free);
  // r=1 via carriers (1,2): 10 + 10 + 20 through hubs 3 then 4.
  CHECK(pc.cost(0, 0, 1) == 40);
  CHECK(inst.hubs()[pc.witness_i(0, 0, 1)] == 3);
  CHECK(inst.hubs()[pc.witness_j(0, 0, 1)] == 4);
  CHECK(pc.cost(0, 0, 0) == 50);
  // Hub-origin r=4 ignores the origin carrier.
  CHECK(pc.cost(3, 0, 1) == pc.cost(3, 1, 1));
  CHECK(pc.cost(3, 0, 1) == 20);
}

TEST_CASE("fixed optimistic cost table on Example 1") {
  Instance inst = test::example1();
  FeeSchedule f = test::table2_fees(inst);
  auto pc = compute_costs(inst, Variant::FixedOptimistic, &f);
  CHECK(pc.unservable(2, 0, 0));
  CHECK(pc.cost(2, 0, 1) == 30);
  CHECK(inst.hubs()[pc.witness_i(2, 0, 1)] == 3);
  CHECK(inst.hubs()[pc.witness_j(2, 0, 1)] == 4);
  // r=2 is refused by both carriers.
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l) CHECK(pc.unservable(1, k, l));
  CHECK(std::isinf(pc.min_cost(1)));
  CHECK_THROWS_AS(compute_costs(inst, Variant::FixedRelaxed), Error);
}

TEST_CASE("hub network completion") {
  SUBCASE("raw Example 1 keeps the direct arc and fills the gaps") {
    Instance raw = load_instance(test::data_path("example1_raw.json"));
    CHECK_FALSE(raw.hub_network_complete());
    Instance done = complete_hub_network(raw);
    CHECK(done.hub_network_complete());
    const int h3 = done.hub_pos(3), h4 = done.hub_pos(4), h7 = done.hub_pos(7);
    CHECK(done.leader_cost(0, h3, h4) == 10);  // 3-6-7-4 costs 22
    CHECK(done.leader_cost(0, h3, h7) == 13);
    CHECK(done.triangle_violation().empty());
  }
  SUBCASE("chain of three hubs") {
    Instance done = complete_hub_network(chain());
    CHECK(done.leader_cost(0, 0, 2) == 2);
    CHECK(done.leader_cost(1, 2, 0) == 2);
  }
  SUBCASE("a disconnected pair that a commodity needs is an error") {
    Instance inst = chain();
    for (int r = 0; r < 2; ++r) {
      inst.set_leader_cost(r, 1, 2, kInf);
      inst.set_leader_cost(r, 2, 1, kInf);
    }
    CHECK_THROWS_AS(complete_hub_network(inst), ValidationError);
  }
}

TEST_CASE("redundant hub removal") {
  Instance raw = complete_hub_network(load_instance(test::data_path("example1_raw.json")));
  HubRemoval rm = remove_redundant_hubs(raw);
  CHECK(rm.removed == std::vector<int>{6, 7});
  CHECK(rm.instance.hubs() == std::vector<int>{3, 4});
  CHECK(rm.instance.node_count() == 5);
  CHECK(rm.instance.leader_cost(0, 0, 1) == 10);

  Instance ex1 = test::example1();
  HubRemoval none = remove_redundant_hubs(ex1);
  CHECK(none.removed.empty());
  CHECK(none.instance == ex1);
}

TEST_CASE("fees and solutions move across hub removal") {
  Instance raw = complete_hub_network(load_instance(test::data_path("example1_raw.json")));
  HubRemoval rm = remove_redundant_hubs(raw);
  FeeSchedule small = test::table2_fees(rm.instance);
  FeeSchedule big = lift_fees(raw, rm, small);
  CHECK(big.p(0, raw.hub_pos(3)) == 30);
  CHECK(big.q(3, raw.hub_pos(4)) == 40);
  CHECK(big.p(0, raw.hub_pos(6)) == 0);
  CHECK(restrict_fees(raw, rm, big) == small);
}

TEST_CASE("hub-to-hub commodities are resolved up front") {
  auto make = [](double b) {
    Instance inst(3, {1, 2}, 1, {{1, 2, 1, b}, {3, 2, 1, 100}});
    for (int r = 0; r < 2; ++r)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) inst.set_leader_cost(r, i, j, i == j ? 0 : 10);
    inst.set_access_price(1, 0, 0, 5);
    return inst;
  };
  auto res = resolve_hub_commodities(make(100));
  REQUIRE(res.report.resolved_hub_commodities.size() == 1);
  CHECK(res.report.resolved_hub_commodities[0].served);
  CHECK(res.report.resolved_hub_commodities[0].profit == 90);
  CHECK(res.instance.status(0) == CommodityStatus::ResolvedHub);
  CHECK(res.instance.status(1) == CommodityStatus::Active);
  CHECK(hub_commodity_profit(make(100)) == 90);
  CHECK_FALSE(resolve_hub_commodities(make(5)).report.resolved_hub_commodities[0].served);
  // b equal to the trunk cost is not strictly profitable.
  CHECK_FALSE(resolve_hub_commodities(make(10)).report.resolved_hub_commodities[0].served);
  CHECK(hub_commodity_profit(make(10)) == 0);
}

TEST_CASE("unprofitable commodities are pruned") {
  Instance inst = test::example1();
  auto rep = prune_unprofitable(compute_costs(inst, Variant::Free), inst);
  CHECK(rep.removed_unprofitable.empty());

  // Cheapest FREE route for r=1 costs 40, so b = 40 is removed at the boundary.
  for (auto [b, removed] : {std::pair{40.0, true}, std::pair{40.5, false}}) {
    auto j = nlohmann::json::parse(read_text(test::data_path("example1.json")));
    j["commodities"][0]["b"] = b;
    Instance e = instance_from_json(j);
    auto r = prune_unprofitable(compute_costs(e, Variant::Free), e);
    CHECK((std::find(r.removed_unprofitable.begin(), r.removed_unprofitable.end(), 0) !=
           r.removed_unprofitable.end()) == removed);
    Instance pruned = apply_prune(e, r);
    CHECK((pruned.status(0) == CommodityStatus::PrunedUnprofitable) == removed);
  }
}

TEST_CASE("compute_costs agrees with a pair-enumeration oracle") {
  int cells = 0;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    Instance inst = random_instance(seed);
    FeeSchedule fees = make_random_fees(inst, seed + 77);
    for (Variant v : {Variant::Free, Variant::FixedOptimistic, Variant::FixedRelaxed}) {
      auto pc = compute_costs(inst, v, &fees);
      for (int r = 0; r < inst.commodity_count(); ++r)
        for (int k = 0; k < inst.carrier_count(); ++k)
          for (int l = 0; l < inst.carrier_count(); ++l) {
            double want = oracle_cost(inst, v, &fees, r, k, l);
            INFO("seed " << seed << " variant " << to_string(v) << " r " << r);
            CHECK(close(pc.cost(r, k, l), want));
            if (pc.unservable(r, k, l)) continue;
            // The witness pair reproduces the cost.
            const FeeSchedule* fp = v == Variant::Free ? nullptr : &fees;
            int i = pc.witness_i(r, k, l), j = pc.witness_j(r, k, l);
            double a = inst.origin_is_hub(r) ? 0 : (fp ? fp->p(r, i) : inst.access_raw(r, k, i));
            double b = inst.dest_is_hub(r) ? 0 : (fp ? fp->q(r, j) : inst.dist_raw(r, l, j));
            CHECK(close(a + inst.leader_cost(r, i, j) + b, want));
            ++cells;
          }
      // Relaxed response sets contain the optimistic ones, so costs can only drop.
      if (v == Variant::FixedRelaxed) {
        auto opt = compute_costs(inst, Variant::FixedOptimistic, &fees);
        for (int r = 0; r < inst.commodity_count(); ++r)
          CHECK(pc.min_cost(r) <= opt.min_cost(r));
      }
    }
  }
  CHECK(cells > 100);
}

TEST_CASE("parallel_for visits every index once and rethrows") {
  for (int threads : {1, 3, 0}) {
    std::vector<std::atomic<int>> hits(500);
    parallel_for(500, [&](int i) { hits[i]++; }, threads);
    CHECK(std::all_of(hits.begin(), hits.end(), [](const auto& h) { return h.load() == 1; }));
  }
  CHECK_THROWS_AS(parallel_for(
                      10, [](int i) { if (i == 7) throw Error("boom"); }, 4),
                  Error);
  parallel_for(0, [](int) { FAIL("called on empty range"); });
}
