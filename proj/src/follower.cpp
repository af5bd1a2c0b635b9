#include "mcfod/follower.hpp"

#include <sstream>

namespace mcfod {

bool ResponseSet::contains(int hi) const {
  return std::find(hubs.begin(), hubs.end(), hi) != hubs.end();
}

namespace {

template <class PriceFn>
ResponseSet respond(int h, std::span<const double> fee, PriceFn price, ResponseMode mode) {
  ResponseSet out;
  double best = -kInf;
  for (int i = 0; i < h; ++i) {
    double c = price(i);
    if (std::isnan(c) || !approx_ge(fee[i], c)) continue;
    best = std::max(best, fee[i] - c);
  }
  if (best == -kInf) return out;
  out.value = std::max(0.0, best);
  for (int i = 0; i < h; ++i) {
    double c = price(i);
    if (std::isnan(c) || !approx_ge(fee[i], c)) continue;
    if (mode == ResponseMode::Relaxed) {
      out.hubs.push_back(i);
    } else {
      double m = fee[i] - c;
      if (m >= best - tol_scale(fee[i], c)) out.hubs.push_back(i);
    }
  }
  return out;
}

std::string num(double v) {
  std::ostringstream s;
  s.precision(12);
  s << v;
  return s.str();
}

}  // namespace

ResponseSet first_leg_response(const Instance& inst, int r, int k, std::span<const double> p,
                               ResponseMode mode) {
  if (inst.origin_is_hub(r)) throw Error("first_leg_response: commodity origin is a hub");
  return respond(inst.hub_count(), p, [&](int i) { return inst.access_raw(r, k, i); }, mode);
}

ResponseSet third_leg_response(const Instance& inst, int r, int k, std::span<const double> q,
                               ResponseMode mode) {
  if (inst.dest_is_hub(r)) throw Error("third_leg_response: commodity destination is a hub");
  return respond(inst.hub_count(), q, [&](int i) { return inst.dist_raw(r, k, i); }, mode);
}

double route_cost(const Instance& inst, int r, int hi, int hj, const FeeSchedule& fees) {
  double c = inst.leader_cost(r, hi, hj);
  if (!inst.origin_is_hub(r)) c += fees.p(r, hi);
  if (!inst.dest_is_hub(r)) c += fees.q(r, hj);
  return c;
}

RoutedCost leader_cost_detail(const Instance& inst, int r, const Allocation& alloc,
                              const FeeSchedule& fees, ResponseMode mode) {
  const auto& com = inst.commodity(r);
  std::vector<int> I, J;
  if (inst.origin_is_hub(r)) {
    I = {inst.hub_pos(com.origin)};
  } else {
    int k = alloc.of(inst, com.origin);
    if (k == kNone) return {};
    I = first_leg_response(inst, r, k, fees.p_row(r), mode).hubs;
  }
  if (inst.dest_is_hub(r)) {
    J = {inst.hub_pos(com.destination)};
  } else {
    int l = alloc.of(inst, com.destination);
    if (l == kNone) return {};
    J = third_leg_response(inst, r, l, fees.q_row(r), mode).hubs;
  }
  RoutedCost best;
  for (int i : I)
    for (int j : J) {
      double c = route_cost(inst, r, i, j, fees);
      if (c < best.cost) best = {c, i, j};
    }
  return best;
}

double leader_cost(const Instance& inst, int r, const Allocation& alloc, const FeeSchedule& fees,
                   ResponseMode mode) {
  return leader_cost_detail(inst, r, alloc, fees, mode).cost;
}

nlohmann::ordered_json VerificationReport::to_json() const {
  nlohmann::ordered_json j;
  j["ok"] = ok();
  j["recomputed_objective"] = recomputed_objective;
  auto v = nlohmann::ordered_json::array();
  for (const auto& x : violations)
    v.push_back({{"commodity", x.commodity < 0 ? 0 : x.commodity + 1},
                 {"check", x.check},
                 {"expected", x.expected},
                 {"actual", x.actual}});
  j["violations"] = std::move(v);
  return j;
}

VerificationReport verify_solution(const Instance& inst, const LeaderSolution& sol, Variant variant,
                                   const FeeSchedule* fixed_fees) {
  VerificationReport rep;
  auto fail = [&](int r, std::string check, std::string expected, std::string actual) {
    rep.violations.push_back({r, std::move(check), std::move(expected), std::move(actual)});
  };
  const ResponseMode mode = mode_of(variant);

  if (static_cast<int>(sol.allocation.assign.size()) != inst.non_hub_count()) {
    fail(-1, "allocation_domain", std::to_string(inst.non_hub_count()),
         std::to_string(sol.allocation.assign.size()));
    return rep;
  }
  for (int k : sol.allocation.assign)
    if (k < kNone || k >= inst.carrier_count()) {
      fail(-1, "allocation_range", "carrier in [0," + std::to_string(inst.carrier_count()) + "]",
           std::to_string(k + 1));
      return rep;
    }
  try {
    sol.fees.validate(inst);
  } catch (const Error& e) {
    fail(-1, "fees_shape", "fee schedule matching the instance", e.what());
    return rep;
  }
  std::vector<int> keys;
  for (const auto& [r, hp] : sol.route) keys.push_back(r);
  if (keys != sol.served) fail(-1, "served_routes", "one route per served commodity", "mismatch");

  if (is_fixed(variant) && fixed_fees) {
    for (int r = 0; r < inst.commodity_count(); ++r)
      for (int i = 0; i < inst.hub_count(); ++i) {
        if (sol.fees.has_p(r) && !approx_eq(sol.fees.p(r, i), fixed_fees->p(r, i)))
          fail(r, "fixed_fee_p", num(fixed_fees->p(r, i)), num(sol.fees.p(r, i)));
        if (sol.fees.has_q(r) && !approx_eq(sol.fees.q(r, i), fixed_fees->q(r, i)))
          fail(r, "fixed_fee_q", num(fixed_fees->q(r, i)), num(sol.fees.q(r, i)));
      }
  }

  double total = 0, scale = 0;
  for (const auto& [r, hp] : sol.route) {
    if (r < 0 || r >= inst.commodity_count()) {
      fail(r, "commodity_range", "valid index", std::to_string(r + 1));
      continue;
    }
    const auto& com = inst.commodity(r);
    int hi = inst.hub_pos(hp.i), hj = inst.hub_pos(hp.j);
    if (hi == kNone || hj == kNone) {
      fail(r, "route_hubs", "hub nodes", std::to_string(hp.i) + "," + std::to_string(hp.j));
      continue;
    }
    bool ok = true;
    if (inst.origin_is_hub(r) && hp.i != com.origin) {
      fail(r, "route_origin", std::to_string(com.origin), std::to_string(hp.i));
      ok = false;
    }
    if (inst.dest_is_hub(r) && hp.j != com.destination) {
      fail(r, "route_destination", std::to_string(com.destination), std::to_string(hp.j));
      ok = false;
    }
    if (!inst.origin_is_hub(r)) {
      int k = sol.allocation.of(inst, com.origin);
      if (k == kNone) {
        fail(r, "origin_allocated", "a carrier", "none");
        ok = false;
      } else if (!first_leg_response(inst, r, k, sol.fees.p_row(r), mode).contains(hi)) {
        fail(r, "first_leg_response", "hub " + std::to_string(hp.i) + " in response set", "refused");
        ok = false;
      }
    }
    if (!inst.dest_is_hub(r)) {
      int l = sol.allocation.of(inst, com.destination);
      if (l == kNone) {
        fail(r, "destination_allocated", "a carrier", "none");
        ok = false;
      } else if (!third_leg_response(inst, r, l, sol.fees.q_row(r), mode).contains(hj)) {
        fail(r, "third_leg_response", "hub " + std::to_string(hp.j) + " in response set", "refused");
        ok = false;
      }
    }
    double cost = route_cost(inst, r, hi, hj, sol.fees);
    if (!std::isfinite(cost)) {
      fail(r, "route_cost", "finite", "inf");
      continue;
    }
    total += com.revenue - cost;
    scale += com.revenue + cost;
    if (ok) {
      double best = leader_cost(inst, r, sol.allocation, sol.fees, mode);
      if (!approx_eq(cost, best)) fail(r, "min_cost", num(best), num(cost));
    }
  }
  rep.recomputed_objective = total;
  if (std::abs(total - sol.objective) > kTol * std::max(1.0, scale))
    fail(-1, "objective", num(total), num(sol.objective));
  return rep;
}

}  // namespace mcfod
