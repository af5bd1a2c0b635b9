#include "mcfod/preprocess.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <sstream>
#include <thread>

#include "mcfod/follower.hpp"

namespace mcfod {

void parallel_for(int n, const std::function<void(int)>& fn, int threads) {
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(err_mu);
          if (!err) err = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

PreprocessedCosts::PreprocessedCosts(Variant v, int commodities, int carriers)
    : variant_(v), R_(commodities), K_(carriers) {
  size_t n = static_cast<size_t>(R_) * K_ * K_;
  cost_.assign(n, kUnservable);
  wi_.assign(n, kNone);
  wj_.assign(n, kNone);
}

double PreprocessedCosts::min_cost(int r) const {
  double m = kInf;
  for (int k = 0; k < K_; ++k)
    for (int l = 0; l < K_; ++l) m = std::min(m, cost(r, k, l));
  return m;
}

// ---------------------------------------------------------------------------

namespace {

using Matrix = std::vector<double>;

void floyd_warshall(Matrix& d, int h, std::vector<int>* next) {
  if (next) {
    next->assign(static_cast<size_t>(h) * h, kNone);
    for (int i = 0; i < h; ++i)
      for (int j = 0; j < h; ++j)
        if (std::isfinite(d[i * h + j])) (*next)[i * h + j] = j;
  }
  for (int m = 0; m < h; ++m)
    for (int i = 0; i < h; ++i) {
      double dim = d[i * h + m];
      if (!std::isfinite(dim)) continue;
      for (int j = 0; j < h; ++j) {
        double via = dim + d[m * h + j];
        if (via < d[i * h + j]) {
          d[i * h + j] = via;
          if (next) (*next)[i * h + j] = (*next)[i * h + m];
        }
      }
    }
}

bool proportional(const Instance& inst) {
  const int R = inst.commodity_count(), h = inst.hub_count();
  if (R < 2) return false;
  const double w0 = inst.commodity(0).demand;
  for (int r = 1; r < R; ++r) {
    const double wr = inst.commodity(r).demand;
    for (int i = 0; i < h; ++i)
      for (int j = 0; j < h; ++j) {
        double a = inst.leader_cost(r, i, j), b = inst.leader_cost(0, i, j);
        if (std::isinf(a) != std::isinf(b)) return false;
        if (std::isinf(a)) continue;
        double x = a * w0, y = b * wr;
        if (std::abs(x - y) > 1e-12 * std::max({1.0, std::abs(x), std::abs(y)})) return false;
      }
  }
  return true;
}

std::vector<char> usable_first(const Instance& inst, int r) {
  std::vector<char> u(inst.hub_count(), 0);
  if (inst.origin_is_hub(r)) {
    u[inst.hub_pos(inst.commodity(r).origin)] = 1;
    return u;
  }
  for (int k = 0; k < inst.carrier_count(); ++k)
    for (int i = 0; i < inst.hub_count(); ++i)
      if (inst.has_access(r, k, i)) u[i] = 1;
  return u;
}

std::vector<char> usable_third(const Instance& inst, int r) {
  std::vector<char> u(inst.hub_count(), 0);
  if (inst.dest_is_hub(r)) {
    u[inst.hub_pos(inst.commodity(r).destination)] = 1;
    return u;
  }
  for (int k = 0; k < inst.carrier_count(); ++k)
    for (int i = 0; i < inst.hub_count(); ++i)
      if (inst.has_dist(r, k, i)) u[i] = 1;
  return u;
}

}  // namespace

Instance complete_hub_network(const Instance& in) {
  Instance out = in;
  const int R = in.commodity_count(), h = in.hub_count();
  if (R == 0 || h == 0) return out;

  if (proportional(in)) {
    // One shortest-path structure serves every commodity; each commodity
    // then sums its own arc costs along the shared paths.
    Matrix base(static_cast<size_t>(h) * h);
    for (int i = 0; i < h; ++i)
      for (int j = 0; j < h; ++j) base[i * h + j] = in.leader_cost(0, i, j);
    std::vector<int> next;
    floyd_warshall(base, h, &next);
    parallel_for(R, [&](int r) {
      for (int i = 0; i < h; ++i)
        for (int j = 0; j < h; ++j) {
          if (!std::isfinite(base[i * h + j]) || next[i * h + j] == j) continue;
          double sum = 0;
          int cur = i, steps = 0;
          do {
            int nx = next[cur * h + j];
            sum += in.leader_cost(r, cur, nx);
            cur = nx;
          } while (cur != j && ++steps <= h);
          out.set_leader_cost(r, i, j, std::min(sum, in.leader_cost(r, i, j)));
        }
    });
  } else {
    parallel_for(R, [&](int r) {
      Matrix d(static_cast<size_t>(h) * h);
      for (int i = 0; i < h; ++i)
        for (int j = 0; j < h; ++j) d[i * h + j] = in.leader_cost(r, i, j);
      floyd_warshall(d, h, nullptr);
      for (int i = 0; i < h; ++i)
        for (int j = 0; j < h; ++j) out.set_leader_cost(r, i, j, d[i * h + j]);
    });
  }

  for (int r = 0; r < R; ++r) {
    auto uf = usable_first(out, r), ut = usable_third(out, r);
    for (int i = 0; i < h; ++i)
      for (int j = 0; j < h; ++j)
        if (uf[i] && ut[j] && !std::isfinite(out.leader_cost(r, i, j)))
          throw ValidationError("leader_cost",
                                "no path from hub " + std::to_string(in.hubs()[i]) + " to hub " +
                                    std::to_string(in.hubs()[j]) + " for commodity " +
                                    std::to_string(r + 1));
  }
  return out;
}

HubRemoval remove_redundant_hubs(const Instance& in) {
  const int h = in.hub_count(), R = in.commodity_count(), K = in.carrier_count();
  std::vector<char> keep(h, 0);
  for (int r = 0; r < R; ++r) {
    const auto& c = in.commodity(r);
    if (in.is_hub(c.origin)) keep[in.hub_pos(c.origin)] = 1;
    if (in.is_hub(c.destination)) keep[in.hub_pos(c.destination)] = 1;
    for (int k = 0; k < K; ++k)
      for (int i = 0; i < h; ++i)
        if (in.has_access(r, k, i) || in.has_dist(r, k, i)) keep[i] = 1;
  }
  HubRemoval res;
  for (int i = 0; i < h; ++i)
    if (!keep[i]) res.removed.push_back(in.hubs()[i]);
  if (res.removed.empty()) {
    res.instance = in;
    return res;
  }

  std::vector<int> node_map(in.node_count() + 1, kNone);
  int next_id = 0;
  for (int v = 1; v <= in.node_count(); ++v) {
    int hp = in.hub_pos(v);
    if (hp != kNone && !keep[hp]) continue;
    node_map[v] = ++next_id;
  }
  std::vector<int> hubs, old_pos;
  for (int i = 0; i < h; ++i)
    if (keep[i]) {
      hubs.push_back(node_map[in.hubs()[i]]);
      old_pos.push_back(i);
    }
  std::vector<Commodity> coms = in.commodities();
  for (auto& c : coms) {
    c.origin = node_map[c.origin];
    c.destination = node_map[c.destination];
  }
  Instance out(next_id, hubs, K, coms);
  const int nh = static_cast<int>(hubs.size());
  for (int r = 0; r < R; ++r) {
    out.set_status(r, in.status(r));
    for (int a = 0; a < nh; ++a) {
      for (int b = 0; b < nh; ++b) out.set_leader_cost(r, a, b, in.leader_cost(r, old_pos[a], old_pos[b]));
      for (int k = 0; k < K; ++k) {
        if (in.has_access(r, k, old_pos[a])) out.set_access_price(r, k, a, in.access_raw(r, k, old_pos[a]));
        if (in.has_dist(r, k, old_pos[a])) out.set_dist_price(r, k, a, in.dist_raw(r, k, old_pos[a]));
      }
    }
  }
  out.metadata = in.metadata;
  nlohmann::json map = nlohmann::json::object();
  for (int v = 1; v <= in.node_count(); ++v)
    if (node_map[v] != kNone) map[std::to_string(v)] = node_map[v];
  out.metadata["node_map"] = map;
  out.metadata["removed_hubs"] = res.removed;
  res.instance = std::move(out);
  return res;
}

double hub_commodity_profit(const Instance& inst, std::vector<int>* served) {
  double total = 0;
  for (int r = 0; r < inst.commodity_count(); ++r) {
    if (!inst.hub_to_hub(r) || inst.status(r) == CommodityStatus::PrunedUnprofitable) continue;
    const auto& c = inst.commodity(r);
    double cost = inst.leader_cost(r, inst.hub_pos(c.origin), inst.hub_pos(c.destination));
    if (approx_gt(c.revenue, cost)) {
      total += c.revenue - cost;
      if (served) served->push_back(r);
    }
  }
  return total;
}

namespace {

// Old hub position of every surviving hub, in the reduced order.
std::vector<int> kept_positions(const Instance& original, const HubRemoval& removal) {
  std::vector<int> kept;
  const auto& gone = removal.removed;
  for (int i = 0; i < original.hub_count(); ++i)
    if (std::find(gone.begin(), gone.end(), original.hubs()[i]) == gone.end()) kept.push_back(i);
  if (static_cast<int>(kept.size()) != removal.instance.hub_count())
    throw ValidationError("removal", "hub sets do not match the original instance");
  return kept;
}

}  // namespace

FeeSchedule restrict_fees(const Instance& original, const HubRemoval& removal, const FeeSchedule& fees) {
  const auto kept = kept_positions(original, removal);
  FeeSchedule out = FeeSchedule::zeros(removal.instance);
  for (int r = 0; r < original.commodity_count(); ++r)
    for (size_t t = 0; t < kept.size(); ++t) {
      if (out.has_p(r)) out.set_p(r, static_cast<int>(t), fees.p(r, kept[t]));
      if (out.has_q(r)) out.set_q(r, static_cast<int>(t), fees.q(r, kept[t]));
    }
  return out;
}

FeeSchedule lift_fees(const Instance& original, const HubRemoval& removal, const FeeSchedule& fees) {
  const auto kept = kept_positions(original, removal);
  FeeSchedule out = FeeSchedule::zeros(original);
  for (int r = 0; r < original.commodity_count(); ++r)
    for (size_t t = 0; t < kept.size(); ++t) {
      if (out.has_p(r)) out.set_p(r, kept[t], fees.p(r, static_cast<int>(t)));
      if (out.has_q(r)) out.set_q(r, kept[t], fees.q(r, static_cast<int>(t)));
    }
  return out;
}

LeaderSolution lift_solution(const Instance& original, const HubRemoval& removal,
                             const LeaderSolution& sol) {
  const auto kept = kept_positions(original, removal);
  const Instance& reduced = removal.instance;
  LeaderSolution out = sol;
  // Relabelling is monotone, so non-hub positions are unchanged.
  out.allocation = sol.allocation;
  for (auto& [r, hp] : out.route) {
    hp.i = original.hubs()[kept[reduced.hub_pos(hp.i)]];
    hp.j = original.hubs()[kept[reduced.hub_pos(hp.j)]];
  }
  out.fees = lift_fees(original, removal, sol.fees);
  return out;
}

HubResolution resolve_hub_commodities(const Instance& in) {
  HubResolution res{in, {}};
  for (int r = 0; r < in.commodity_count(); ++r) {
    if (!in.hub_to_hub(r)) continue;
    const auto& c = in.commodity(r);
    double cost = in.leader_cost(r, in.hub_pos(c.origin), in.hub_pos(c.destination));
    bool served = approx_gt(c.revenue, cost);
    res.report.resolved_hub_commodities.push_back({r, served, served ? c.revenue - cost : 0.0});
    res.instance.set_status(r, CommodityStatus::ResolvedHub);
  }
  return res;
}

PreprocessedCosts compute_costs(const Instance& inst, Variant variant, const FeeSchedule* fees) {
  if (is_fixed(variant)) {
    if (!fees) throw Error("compute_costs: " + to_string(variant) + " requires a fee schedule");
    fees->validate(inst);
  }
  const int R = inst.commodity_count(), K = inst.carrier_count(), h = inst.hub_count();
  PreprocessedCosts pc(variant, R, K);
  const ResponseMode mode = mode_of(variant);

  parallel_for(R, [&](int r) {
    using Leg = std::vector<std::pair<int, double>>;  // (hub position, leg cost)
    std::vector<Leg> first(K), third(K);
    const auto& com = inst.commodity(r);
    for (int k = 0; k < K; ++k) {
      if (inst.origin_is_hub(r)) {
        first[k] = {{inst.hub_pos(com.origin), 0.0}};
      } else if (variant == Variant::Free) {
        for (int i = 0; i < h; ++i)
          if (inst.has_access(r, k, i)) first[k].emplace_back(i, inst.access_raw(r, k, i));
      } else {
        for (int i : first_leg_response(inst, r, k, fees->p_row(r), mode).hubs)
          first[k].emplace_back(i, fees->p(r, i));
      }
      if (inst.dest_is_hub(r)) {
        third[k] = {{inst.hub_pos(com.destination), 0.0}};
      } else if (variant == Variant::Free) {
        for (int j = 0; j < h; ++j)
          if (inst.has_dist(r, k, j)) third[k].emplace_back(j, inst.dist_raw(r, k, j));
      } else {
        for (int j : third_leg_response(inst, r, k, fees->q_row(r), mode).hubs)
          third[k].emplace_back(j, fees->q(r, j));
      }
    }
    // Stage one: cheapest first leg plus trunk into every hub j, per k.
    std::vector<double> v(h);
    std::vector<int> bi(h);
    for (int k = 0; k < K; ++k) {
      for (int j = 0; j < h; ++j) {
        v[j] = kInf;
        bi[j] = kNone;
        for (auto [i, a] : first[k]) {
          double c = a + inst.leader_cost(r, i, j);
          if (c < v[j]) {
            v[j] = c;
            bi[j] = i;
          }
        }
      }
      for (int l = 0; l < K; ++l) {
        double best = kInf;
        int best_i = kNone, best_j = kNone;
        for (auto [j, b] : third[l]) {
          if (bi[j] == kNone) continue;
          double c = v[j] + b;
          if (c < best || (c == best && bi[j] < best_i)) {
            best = c;
            best_i = bi[j];
            best_j = j;
          }
        }
        if (best_i != kNone && std::isfinite(best)) pc.set(r, k, l, best, best_i, best_j);
      }
    }
  });
  return pc;
}

PruneReport prune_unprofitable(const PreprocessedCosts& costs, const Instance& inst) {
  PruneReport rep;
  const int R = inst.commodity_count(), K = inst.carrier_count();
  long long initial = static_cast<long long>(R) * K * K, remaining = 0;
  for (int r = 0; r < R; ++r) {
    const double b = inst.commodity(r).revenue;
    if (inst.status(r) == CommodityStatus::PrunedUnprofitable) continue;
    if (inst.status(r) == CommodityStatus::Active && approx_ge(costs.min_cost(r), b)) {
      rep.removed_unprofitable.push_back(r);
      continue;
    }
    for (int k = 0; k < K; ++k)
      for (int l = 0; l < K; ++l)
        if (!costs.unservable(r, k, l) && approx_gt(b, costs.cost(r, k, l))) ++remaining;
  }
  rep.variable_counts["IP.pi"] = {initial, remaining};
  return rep;
}

Instance apply_prune(const Instance& inst, const PruneReport& report) {
  Instance out = inst;
  for (int r : report.removed_unprofitable) out.set_status(r, CommodityStatus::PrunedUnprofitable);
  for (const auto& res : report.resolved_hub_commodities) out.set_status(res.commodity, CommodityStatus::ResolvedHub);
  return out;
}

void PruneReport::merge(const PruneReport& o) {
  resolved_hub_commodities.insert(resolved_hub_commodities.end(), o.resolved_hub_commodities.begin(),
                                  o.resolved_hub_commodities.end());
  removed_unprofitable.insert(removed_unprofitable.end(), o.removed_unprofitable.begin(),
                              o.removed_unprofitable.end());
  removed_hubs.insert(removed_hubs.end(), o.removed_hubs.begin(), o.removed_hubs.end());
  for (const auto& [k, v] : o.variable_counts) variable_counts[k] = v;
}

nlohmann::ordered_json PruneReport::to_json() const {
  nlohmann::ordered_json j;
  auto res = nlohmann::ordered_json::array();
  for (const auto& x : resolved_hub_commodities)
    res.push_back({{"commodity", x.commodity + 1}, {"served", x.served}, {"profit", x.profit}});
  j["resolved_hub_commodities"] = std::move(res);
  auto rem = nlohmann::ordered_json::array();
  for (int r : removed_unprofitable) rem.push_back(r + 1);
  j["removed_unprofitable"] = std::move(rem);
  j["removed_hubs"] = removed_hubs;
  auto counts = nlohmann::ordered_json::object();
  for (const auto& [k, v] : variable_counts) counts[k] = {{"initial", v.first}, {"remaining", v.second}};
  j["variable_counts"] = std::move(counts);
  return j;
}

std::string PruneReport::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "stage,commodity,action,value\n";
  for (const auto& x : resolved_hub_commodities)
    out << "resolve_hub," << x.commodity + 1 << "," << (x.served ? "served" : "unserved") << "," << x.profit << "\n";
  for (int r : removed_unprofitable) out << "prune_unprofitable," << r + 1 << ",removed,0\n";
  for (int v : removed_hubs) out << "remove_hubs,0,removed_hub," << v << "\n";
  for (const auto& [k, v] : variable_counts) {
    out << "variable_count,0," << k << ".initial," << v.first << "\n";
    out << "variable_count,0," << k << ".remaining," << v.second << "\n";
  }
  return out.str();
}

}  // namespace mcfod
