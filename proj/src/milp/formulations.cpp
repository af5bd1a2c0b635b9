#include "mcfod/milp/formulations.hpp"

#include "mcfod/follower.hpp"

namespace mcfod::milp {

namespace {

std::string id(int v) { return std::to_string(v); }

class Builder {
 public:
  Builder(const Instance& inst, Formulation f, Variant v, const BuildOptions& opts,
          const FeeSchedule* fees)
      : inst_(inst), form_(f), var_(v), opts_(opts), fees_(fees),
        K_(inst.carrier_count()), h_(inst.hub_count()) {}

  MilpModel run(const PreprocessedCosts* costs) {
    m_.name = "mcfod_" + to_string(form_) + "_" + to_string(var_);
    add_allocation();
    for (int r = 0; r < inst_.commodity_count(); ++r) {
      if (!in_model(inst_, r, form_)) continue;
      switch (form_) {
        case Formulation::EP: ep(r); break;
        case Formulation::EF:
        case Formulation::IF: flow(r); break;
        case Formulation::IP: ip(r, *costs); break;
      }
    }
    // Hub-to-hub commodities outside the model are a constant.
    double constant = 0;
    auto served = nlohmann::ordered_json::array();
    for (int r = 0; r < inst_.commodity_count(); ++r) {
      if (!inst_.hub_to_hub(r) || in_model(inst_, r, form_)) continue;
      if (inst_.status(r) == CommodityStatus::PrunedUnprofitable) continue;
      const auto& c = inst_.commodity(r);
      double cost = inst_.leader_cost(r, inst_.hub_pos(c.origin), inst_.hub_pos(c.destination));
      if (approx_gt(c.revenue, cost)) {
        constant += c.revenue - cost;
        served.push_back(r + 1);
      }
    }
    m_.objective_constant = constant;
    m_.metadata["formulation"] = to_string(form_);
    m_.metadata["variant"] = to_string(var_);
    m_.metadata["big_m"] = opts_.big_m;
    m_.metadata["defer_cuts"] = opts_.defer_cuts;
    m_.metadata["constant_hub_commodities"] = served;
    if (form_ == Formulation::EP)
      m_.metadata["note"] =
          "x, f and t are continuous; integrality follows from binary s and a";
    if (form_ == Formulation::IP) {
      auto u = nlohmann::ordered_json::array();
      for (int r : unservable_) u.push_back(r + 1);
      m_.metadata["unservable_commodities"] = u;
      m_.metadata["pruned_pi"] = pruned_pi_;
    }
    m_.validate();
    return std::move(m_);
  }

 private:
  // ---- shared pieces -------------------------------------------------------

  void add_allocation() {
    a_.assign(inst_.non_hub_count(), std::vector<int>(K_, -1));
    for (int p = 0; p < inst_.non_hub_count(); ++p) {
      const int node = inst_.non_hubs()[p];
      Row row{"alloc_" + id(node), Sense::LE, 1.0, {}};
      for (int k = 0; k < K_; ++k) {
        VarKey key{Family::A};
        key.i = node;
        key.k = k;
        a_[p][k] = m_.add_binary("a_" + id(node) + "_" + id(k + 1), 0.0, key);
        row.coefs.emplace_back(a_[p][k], 1.0);
      }
      m_.add_row(std::move(row));
    }
  }

  int a_of(int node, int k) const { return a_[inst_.non_hub_pos(node)][k]; }

  bool fixed() const { return is_fixed(var_); }
  double p(int r, int i) const { return fees_->p(r, i); }
  double q(int r, int j) const { return fees_->q(r, j); }

  // Candidate first/third hubs, collapsed for hub endpoints.
  std::vector<int> first_hubs(int r) const {
    if (inst_.origin_is_hub(r)) return {inst_.hub_pos(inst_.commodity(r).origin)};
    std::vector<int> v(h_);
    for (int i = 0; i < h_; ++i) v[i] = i;
    return v;
  }
  std::vector<int> third_hubs(int r) const {
    if (inst_.dest_is_hub(r)) return {inst_.hub_pos(inst_.commodity(r).destination)};
    std::vector<int> v(h_);
    for (int j = 0; j < h_; ++j) v[j] = j;
    return v;
  }

  // Fee-plus-trunk cost of x^r_ij in the fixed variants.
  double fixed_route_cost(int r, int i, int j) const {
    double c = inst_.leader_cost(r, i, j);
    if (!inst_.origin_is_hub(r)) c = p(r, i) + c;
    if (!inst_.dest_is_hub(r)) c = c + q(r, j);
    return c;
  }

  int add_s(int r) {
    VarKey key{Family::S};
    key.r = r;
    return m_.add_binary("s_" + id(r + 1), inst_.commodity(r).revenue, key);
  }

  // x variables (binary for EF/IF), returned as xi[i] / xj[j] lists.
  struct XVars {
    std::vector<std::vector<int>> out_of;  // by first hub
    std::vector<std::vector<int>> into;    // by third hub
    std::vector<int> all;
  };
  XVars add_x(int r, bool binary) {
    XVars xv{std::vector<std::vector<int>>(h_), std::vector<std::vector<int>>(h_), {}};
    const double b = inst_.commodity(r).revenue;
    for (int i : first_hubs(r))
      for (int j : third_hubs(r)) {
        double c = inst_.leader_cost(r, i, j);
        if (!std::isfinite(c)) continue;
        double cost = c;
        if (fixed()) {
          if (approx_ge(fixed_route_cost(r, i, j), b)) continue;  // never worth serving
          // EF/IF charge the fees through their F/T variables.
          if (!binary) cost = fixed_route_cost(r, i, j);
        }
        VarKey key{Family::X};
        key.r = r;
        key.i = i;
        key.j = j;
        std::string name = "x_" + id(r + 1) + "_" + id(inst_.hubs()[i]) + "_" + id(inst_.hubs()[j]);
        int v = binary ? m_.add_binary(name, -cost, key) : m_.add_continuous(name, 0, 1, -cost, key);
        xv.out_of[i].push_back(v);
        xv.into[j].push_back(v);
        xv.all.push_back(v);
      }
    return xv;
  }

  void serve_row(int r, int s, const std::vector<int>& terms) {
    Row row{"serve_" + id(r + 1), Sense::EQ, 0.0, {}};
    for (int v : terms) row.coefs.emplace_back(v, 1.0);
    row.coefs.emplace_back(s, -1.0);
    m_.add_row(std::move(row));
  }

  // Acceptance set of carrier k for a leg; FREE accepts any present arc.
  std::vector<char> accepts(int r, int k, bool first) const {
    std::vector<char> ok(h_, 0);
    if (!fixed()) {
      for (int i = 0; i < h_; ++i) ok[i] = first ? inst_.has_access(r, k, i) : inst_.has_dist(r, k, i);
      return ok;
    }
    auto rs = first ? first_leg_response(inst_, r, k, fees_->p_row(r), mode_of(var_))
                    : third_leg_response(inst_, r, k, fees_->q_row(r), mode_of(var_));
    for (int i : rs.hubs) ok[i] = 1;
    return ok;
  }

  // ---- EP -----------------------------------------------------------------

  void ep(int r) {
    const auto& com = inst_.commodity(r);
    const std::string R = id(r + 1);
    int s = add_s(r);
    XVars xv = add_x(r, false);
    serve_row(r, s, xv.all);

    if (!inst_.origin_is_hub(r)) ep_leg(r, true, xv.out_of, com.origin);
    if (!inst_.dest_is_hub(r)) ep_leg(r, false, xv.into, com.destination);

    if (!fixed() && opts_.ep_strengthen) ep_strengthen(r, xv);
  }

  // f (first leg) or t (third leg) variables with their linking rows.
  void ep_leg(int r, bool first, const std::vector<std::vector<int>>& x_at, int node) {
    const std::string R = id(r + 1);
    const std::string fam = first ? "f" : "t";
    std::vector<std::vector<int>> leg(K_, std::vector<int>(h_, -1));
    for (int k = 0; k < K_; ++k) {
      for (int i = 0; i < h_; ++i) {
        bool present = first ? inst_.has_access(r, k, i) : inst_.has_dist(r, k, i);
        if (!present) continue;
        double price = first ? inst_.access_raw(r, k, i) : inst_.dist_raw(r, k, i);
        double obj = -price;
        if (fixed()) {
          double fee = first ? p(r, i) : q(r, i);
          if (!approx_ge(fee, price)) continue;  // negative margin: never accepted
          obj = 0;
        }
        VarKey key{first ? Family::F : Family::T};
        key.r = r;
        key.k = k;
        key.i = i;
        leg[k][i] = m_.add_continuous(fam + "_" + R + "_" + id(k + 1) + "_" + id(inst_.hubs()[i]), 0, 1, obj, key);
      }
      // Sum over hubs bounded by the allocation.
      Row row{(first ? "oralloc_" : "dralloc_") + R + "_" + id(k + 1), Sense::LE, 0.0, {}};
      for (int i = 0; i < h_; ++i)
        if (leg[k][i] >= 0) row.coefs.emplace_back(leg[k][i], 1.0);
      if (!row.coefs.empty()) {
        row.coefs.emplace_back(a_of(node, k), -1.0);
        m_.add_row(std::move(row));
      }
      if (fixed() && mode_of(var_) == ResponseMode::Optimistic) ep_optimistic(r, first, k, leg[k], node);
    }
    // Routing through hub i needs some carrier to take the leg there.
    for (int i = 0; i < h_; ++i) {
      if (x_at[i].empty()) continue;
      Row row{(first ? "access_" : "distrib_") + R + "_" + id(inst_.hubs()[i]), Sense::GE, 0.0, {}};
      for (int k = 0; k < K_; ++k)
        if (leg[k][i] >= 0) row.coefs.emplace_back(leg[k][i], 1.0);
      for (int v : x_at[i]) row.coefs.emplace_back(v, -1.0);
      m_.add_row(std::move(row));
    }
  }

  // a * [max rho]^+ <= sum rho f, with u, v projected out.
  void ep_optimistic(int r, bool first, int k, const std::vector<int>& leg, int node) {
    double best = -kInf;
    int best_i = kNone;
    for (int i = 0; i < h_; ++i) {
      bool present = first ? inst_.has_access(r, k, i) : inst_.has_dist(r, k, i);
      if (!present) continue;
      double m = (first ? p(r, i) : q(r, i)) - (first ? inst_.access_raw(r, k, i) : inst_.dist_raw(r, k, i));
      if (m > best) {
        best = m;
        best_i = i;
      }
    }
    if (best_i == kNone) return;
    const double fee_b = first ? p(r, best_i) : q(r, best_i);
    const double c_b = first ? inst_.access_raw(r, k, best_i) : inst_.dist_raw(r, k, best_i);
    if (!approx_gt(fee_b, c_b)) return;  // best margin is zero: row is vacuous
    Row row{(first ? "optf_" : "optt_") + id(r + 1) + "_" + id(k + 1), Sense::GE, 0.0, {}};
    for (int i = 0; i < h_; ++i) {
      if (leg[i] < 0) continue;
      double fee = first ? p(r, i) : q(r, i);
      double c = first ? inst_.access_raw(r, k, i) : inst_.dist_raw(r, k, i);
      double rho = fee - c;
      // Same tolerance band as the follower's argmax set.
      if (rho >= best - tol_scale(fee, c)) rho = best;
      else if (rho < 0) rho = 0;
      if (rho != 0) row.coefs.emplace_back(leg[i], rho);
    }
    row.coefs.emplace_back(a_of(node, k), -best);
    m_.add_row(std::move(row));
  }

  void ep_strengthen(int r, const XVars& xv) {
    const auto& com = inst_.commodity(r);
    const double b = com.revenue;
    const bool oh = inst_.origin_is_hub(r), dh = inst_.dest_is_hub(r);
    const std::string R = id(r + 1);
    for (int v : xv.all) {
      const VarKey& key = m_.variables()[v].key;
      const int i = key.i, j = key.j;
      const double c = inst_.leader_cost(r, i, j);
      for (int k = 0; k < (oh ? 1 : K_); ++k)
        for (int l = 0; l < (dh ? 1 : K_); ++l) {
          bool blocked = false;
          if (!oh && !inst_.has_access(r, k, i)) blocked = true;
          if (!dh && !inst_.has_dist(r, l, j)) blocked = true;
          if (!blocked) {
            double cost = (oh ? 0.0 : inst_.access_raw(r, k, i)) + c;
            cost = cost + (dh ? 0.0 : inst_.dist_raw(r, l, j));
            blocked = approx_ge(cost, b);
          }
          if (!blocked) continue;
          std::string name = "strong_" + R + "_" + id(inst_.hubs()[i]) + "_" + id(inst_.hubs()[j]);
          Row row{"", Sense::LE, 1.0, {{v, 1.0}}};
          if (!oh) {
            row.coefs.emplace_back(a_of(com.origin, k), 1.0);
            name += "_" + id(k + 1);
          }
          if (!dh) {
            row.coefs.emplace_back(a_of(com.destination, l), 1.0);
            name += "_" + id(l + 1);
          }
          row.rhs = static_cast<double>(row.coefs.size()) - 1.0;
          row.name = std::move(name);
          m_.add_row(std::move(row));
        }
    }
  }

  // ---- EF / IF ------------------------------------------------------------

  void flow(int r) {
    const auto& com = inst_.commodity(r);
    int s = add_s(r);
    XVars xv = add_x(r, true);
    serve_row(r, s, xv.all);
    if (!inst_.origin_is_hub(r)) flow_leg(r, true, xv.out_of, com.origin);
    if (!inst_.dest_is_hub(r)) flow_leg(r, false, xv.into, com.destination);
  }

  void emit_cost_row(Row row) {
    if (opts_.defer_cuts) m_.add_deferred(std::move(row));
    else m_.add_row(std::move(row));
  }

  void flow_leg(int r, bool first, const std::vector<std::vector<int>>& x_at, int node) {
    const std::string R = id(r + 1);
    const std::string side = first ? "o" : "d";
    auto price = [&](int k, int i) { return first ? inst_.access_raw(r, k, i) : inst_.dist_raw(r, k, i); };
    auto fee = [&](int i) { return first ? p(r, i) : q(r, i); };

    // Allocated carrier required to route through any hub.
    for (int i = 0; i < h_; ++i) {
      if (x_at[i].empty()) continue;
      Row row{"link" + side + "_" + R + "_" + id(inst_.hubs()[i]), Sense::LE, 0.0, {}};
      for (int v : x_at[i]) row.coefs.emplace_back(v, 1.0);
      for (int k = 0; k < K_; ++k) row.coefs.emplace_back(a_of(node, k), -1.0);
      m_.add_row(std::move(row));
    }

    // Carrier k may not take the leg at a hub outside its acceptance set.
    std::vector<std::vector<char>> acc(K_);
    for (int k = 0; k < K_; ++k) {
      acc[k] = accepts(r, k, first);
      for (int i = 0; i < h_; ++i) {
        if (acc[k][i] || x_at[i].empty()) continue;
        Row row{"forbid" + side + "_" + R + "_" + id(k + 1) + "_" + id(inst_.hubs()[i]), Sense::LE, 1.0, {}};
        for (int v : x_at[i]) row.coefs.emplace_back(v, 1.0);
        row.coefs.emplace_back(a_of(node, k), 1.0);
        m_.add_row(std::move(row));
      }
    }

    const Family fam = first ? Family::FC : Family::TC;
    const std::string cname = first ? "F" : "T";
    auto add_x_terms = [&](Row& row, int i, double coef) {
      for (int v : x_at[i]) row.coefs.emplace_back(v, coef);
    };

    if (form_ == Formulation::EF) {
      for (int i = 0; i < h_; ++i) {
        if (x_at[i].empty()) continue;
        bool any = false;
        for (int k = 0; k < K_; ++k) any = any || acc[k][i];
        if (!any) continue;
        VarKey key{fam};
        key.r = r;
        key.i = i;
        const std::string H = id(inst_.hubs()[i]);
        int F = m_.add_continuous(cname + "_" + R + "_" + H, 0, kInf, -1.0, key);
        if (!fixed() && opts_.big_m) {
          double M = 0;
          for (int k = 0; k < K_; ++k)
            if (acc[k][i]) M = std::max(M, price(k, i));
          Row row{"cost" + cname + "_" + R + "_" + H, Sense::GE, -M, {{F, 1.0}}};
          for (int k = 0; k < K_; ++k)
            if (acc[k][i] && price(k, i) != 0) row.coefs.emplace_back(a_of(node, k), -price(k, i));
          add_x_terms(row, i, -M);
          emit_cost_row(std::move(row));
        } else if (fixed() && opts_.big_m) {
          if (fee(i) == 0) continue;
          Row row{"cost" + cname + "_" + R + "_" + H, Sense::GE, 0.0, {{F, 1.0}}};
          add_x_terms(row, i, -fee(i));
          emit_cost_row(std::move(row));
        } else {
          for (int k = 0; k < K_; ++k) {
            if (!acc[k][i]) continue;
            double c = fixed() ? fee(i) : price(k, i);
            if (c == 0) continue;
            Row row{"cost" + cname + "_" + R + "_" + H + "_" + id(k + 1), Sense::GE, -c, {{F, 1.0}}};
            add_x_terms(row, i, -c);
            row.coefs.emplace_back(a_of(node, k), -c);
            emit_cost_row(std::move(row));
          }
        }
      }
      return;
    }

    // IF: one aggregated cost variable per leg.
    VarKey key{fam};
    key.r = r;
    int F = m_.add_continuous(cname + "b_" + R, 0, kInf, -1.0, key);
    if (opts_.big_m) {
      if (fixed()) {
        Row row{"cost" + cname + "_" + R, Sense::GE, 0.0, {{F, 1.0}}};
        for (int i = 0; i < h_; ++i)
          if (fee(i) != 0) add_x_terms(row, i, -fee(i));
        if (row.coefs.size() > 1) emit_cost_row(std::move(row));
        return;
      }
      for (int k = 0; k < K_; ++k) {
        double M = 0;
        for (int i = 0; i < h_; ++i)
          if (acc[k][i]) M = std::max(M, price(k, i));
        if (M == 0) continue;
        Row row{"cost" + cname + "_" + R + "_" + id(k + 1), Sense::GE, -M, {{F, 1.0}}};
        for (int i = 0; i < h_; ++i)
          if (acc[k][i] && price(k, i) != 0) add_x_terms(row, i, -price(k, i));
        row.coefs.emplace_back(a_of(node, k), -M);
        emit_cost_row(std::move(row));
      }
      return;
    }
    for (int k = 0; k < K_; ++k)
      for (int i = 0; i < h_; ++i) {
        if (!acc[k][i] || x_at[i].empty()) continue;
        double c = fixed() ? fee(i) : price(k, i);
        if (c == 0) continue;
        Row row{"cost" + cname + "_" + R + "_" + id(inst_.hubs()[i]) + "_" + id(k + 1), Sense::GE, -c, {{F, 1.0}}};
        add_x_terms(row, i, -c);
        row.coefs.emplace_back(a_of(node, k), -c);
        emit_cost_row(std::move(row));
      }
  }

  // ---- IP -----------------------------------------------------------------

  void ip(int r, const PreprocessedCosts& costs) {
    const auto& com = inst_.commodity(r);
    const double b = com.revenue;
    const std::string R = id(r + 1);
    int s = add_s(r);
    std::vector<std::vector<int>> pi(K_, std::vector<int>(K_, -1));
    std::vector<int> all;
    bool any_servable = false;
    for (int k = 0; k < K_; ++k)
      for (int l = 0; l < K_; ++l) {
        if (costs.unservable(r, k, l)) {
          ++pruned_pi_;
          continue;
        }
        any_servable = true;
        double c = costs.cost(r, k, l);
        if (opts_.prune_ip && !approx_gt(b, c)) {
          ++pruned_pi_;
          continue;
        }
        VarKey key{Family::PI};
        key.r = r;
        key.k = k;
        key.l = l;
        key.i = costs.witness_i(r, k, l);
        key.j = costs.witness_j(r, k, l);
        pi[k][l] = m_.add_binary("pi_" + R + "_" + id(k + 1) + "_" + id(l + 1), -c, key);
        all.push_back(pi[k][l]);
      }
    if (!any_servable) unservable_.push_back(r);
    serve_row(r, s, all);
    if (!inst_.origin_is_hub(r))
      for (int k = 0; k < K_; ++k) {
        Row row{"linko_" + R + "_" + id(k + 1), Sense::LE, 0.0, {}};
        for (int l = 0; l < K_; ++l)
          if (pi[k][l] >= 0) row.coefs.emplace_back(pi[k][l], 1.0);
        row.coefs.emplace_back(a_of(com.origin, k), -1.0);
        m_.add_row(std::move(row));
      }
    if (!inst_.dest_is_hub(r))
      for (int l = 0; l < K_; ++l) {
        Row row{"linkd_" + R + "_" + id(l + 1), Sense::LE, 0.0, {}};
        for (int k = 0; k < K_; ++k)
          if (pi[k][l] >= 0) row.coefs.emplace_back(pi[k][l], 1.0);
        row.coefs.emplace_back(a_of(com.destination, l), -1.0);
        m_.add_row(std::move(row));
      }
  }

  const Instance& inst_;
  Formulation form_;
  Variant var_;
  BuildOptions opts_;
  const FeeSchedule* fees_;
  int K_, h_;
  MilpModel m_;
  std::vector<std::vector<int>> a_;
  std::vector<int> unservable_;
  long long pruned_pi_ = 0;
};

}  // namespace

bool in_model(const Instance& inst, int r, Formulation f) {
  if (inst.status(r) != CommodityStatus::Active) return false;
  return f == Formulation::IP || !inst.hub_to_hub(r);
}

MilpModel build(const Instance& inst, Formulation f, Variant v, const BuildOptions& opts,
                const FeeSchedule* fees, const PreprocessedCosts* costs) {
  if (is_fixed(v)) {
    if (!fees) throw Error("build: " + to_string(v) + " needs a fee schedule");
    fees->validate(inst);
  }
  if (inst.carrier_count() < 1) throw ValidationError("carriers", "need at least one carrier");
  PreprocessedCosts own;
  if (f == Formulation::IP) {
    if (costs && costs->variant() != v)
      throw Error("build: IP costs were computed for " + to_string(costs->variant()) + ", not " + to_string(v));
    if (!costs) {
      own = compute_costs(inst, v, fees);
      costs = &own;
    }
  }
  return Builder(inst, f, v, opts, fees).run(costs);
}

IpCounts ip_closed_form(const Instance& inst, long long pruned_pi) {
  IpCounts c;
  const long long K = inst.carrier_count();
  long long R = 0, orig = 0, dest = 0;
  for (int r = 0; r < inst.commodity_count(); ++r) {
    if (!in_model(inst, r, Formulation::IP)) continue;
    ++R;
    if (!inst.origin_is_hub(r)) orig += K;
    if (!inst.dest_is_hub(r)) dest += K;
  }
  c.variables = R + static_cast<long long>(inst.non_hub_count()) * K + R * K * K - pruned_pi;
  c.rows = inst.non_hub_count() + R + orig + dest;
  return c;
}

}  // namespace mcfod::milp
