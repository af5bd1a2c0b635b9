#include "mcfod/instance.hpp"

#include <cstring>
#include <set>

namespace mcfod {

Instance::Instance(int node_count, std::vector<int> hubs, int carrier_count,
                   std::vector<Commodity> commodities)
    : n_(node_count), k_(carrier_count), commodities_(std::move(commodities)) {
  if (n_ < 1) throw ValidationError("nodes", "must be >= 1");
  if (k_ < 0) throw ValidationError("carriers", "must be >= 0");
  std::set<int> seen;
  for (size_t t = 0; t < hubs.size(); ++t) {
    int h = hubs[t];
    if (h < 1 || h > n_)
      throw ValidationError("hubs[" + std::to_string(t) + "]", "node id out of range");
    if (!seen.insert(h).second)
      throw ValidationError("hubs[" + std::to_string(t) + "]", "duplicate hub");
  }
  hubs_.assign(seen.begin(), seen.end());
  hub_pos_.assign(n_ + 1, kNone);
  non_hub_pos_.assign(n_ + 1, kNone);
  for (int p = 0; p < hub_count(); ++p) hub_pos_[hubs_[p]] = p;
  for (int v = 1; v <= n_; ++v) {
    if (hub_pos_[v] == kNone) {
      non_hub_pos_[v] = static_cast<int>(non_hubs_.size());
      non_hubs_.push_back(v);
    }
  }
  const size_t R = commodities_.size(), h = hubs_.size();
  status_.assign(R, CommodityStatus::Active);
  leader_.assign(R * h * h, kInf);
  for (size_t r = 0; r < R; ++r)
    for (size_t i = 0; i < h; ++i) leader_[(r * h + i) * h + i] = 0.0;
  access_.assign(R * k_ * h, std::nan(""));
  dist_.assign(R * k_ * h, std::nan(""));
}

std::optional<double> Instance::access_price(int r, int k, int hi) const {
  double v = access_raw(r, k, hi);
  if (std::isnan(v)) return std::nullopt;
  return v;
}

std::optional<double> Instance::dist_price(int r, int k, int hi) const {
  double v = dist_raw(r, k, hi);
  if (std::isnan(v)) return std::nullopt;
  return v;
}

void Instance::clear_access_price(int r, int k, int hi) { access_[pidx(r, k, hi)] = std::nan(""); }
void Instance::clear_dist_price(int r, int k, int hi) { dist_[pidx(r, k, hi)] = std::nan(""); }

void Instance::validate() const {
  const int h = hub_count();
  for (int r = 0; r < commodity_count(); ++r) {
    const auto& c = commodities_[r];
    const std::string path = "commodities[" + std::to_string(r) + "]";
    if (!valid_node(c.origin)) throw ValidationError(path + ".o", "node id out of range");
    if (!valid_node(c.destination)) throw ValidationError(path + ".d", "node id out of range");
    if (c.origin == c.destination) throw ValidationError(path, "origin equals destination");
    if (!(c.demand > 0) || !std::isfinite(c.demand))
      throw ValidationError(path + ".w", "demand must be positive");
    if (!(c.revenue > 0) || !std::isfinite(c.revenue))
      throw ValidationError(path + ".b", "revenue must be positive");
    for (int i = 0; i < h; ++i)
      for (int j = 0; j < h; ++j) {
        double v = leader_cost(r, i, j);
        if (std::isnan(v) || v < 0)
          throw ValidationError("leader_cost[r=" + std::to_string(r + 1) + ",i=" +
                                    std::to_string(hubs_[i]) + ",j=" + std::to_string(hubs_[j]) + "]",
                                "must be a nonnegative number");
      }
    for (int k = 0; k < k_; ++k)
      for (int i = 0; i < h; ++i) {
        double a = access_raw(r, k, i), d = dist_raw(r, k, i);
        std::string key = "[r=" + std::to_string(r + 1) + ",k=" + std::to_string(k + 1) +
                          ",i=" + std::to_string(hubs_[i]) + "]";
        if (!std::isnan(a)) {
          if (origin_is_hub(r))
            throw ValidationError("access_price" + key, "commodity origin is a hub");
          if (!(a >= 0) || !std::isfinite(a))
            throw ValidationError("access_price" + key, "must be a nonnegative finite number");
        }
        if (!std::isnan(d)) {
          if (dest_is_hub(r))
            throw ValidationError("dist_price" + key, "commodity destination is a hub");
          if (!(d >= 0) || !std::isfinite(d))
            throw ValidationError("dist_price" + key, "must be a nonnegative finite number");
        }
      }
  }
}

bool Instance::hub_network_complete() const {
  for (double v : leader_)
    if (!std::isfinite(v)) return false;
  return true;
}

std::string Instance::triangle_violation(double tol) const {
  const int h = hub_count();
  for (int r = 0; r < commodity_count(); ++r)
    for (int i = 0; i < h; ++i)
      for (int m = 0; m < h; ++m)
        for (int j = 0; j < h; ++j) {
          double direct = leader_cost(r, i, j);
          double via = leader_cost(r, i, m) + leader_cost(r, m, j);
          if (direct > via + tol * std::max(1.0, via))
            return "r=" + std::to_string(r + 1) + " c(" + std::to_string(hubs_[i]) + "," +
                   std::to_string(hubs_[j]) + ") > via " + std::to_string(hubs_[m]);
        }
  return {};
}

static bool same_doubles(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (size_t t = 0; t < a.size(); ++t) {
    if (std::isnan(a[t]) && std::isnan(b[t])) continue;
    if (a[t] != b[t]) return false;
  }
  return true;
}

bool operator==(const Instance& a, const Instance& b) {
  return a.n_ == b.n_ && a.k_ == b.k_ && a.hubs_ == b.hubs_ && a.commodities_ == b.commodities_ &&
         a.status_ == b.status_ && same_doubles(a.leader_, b.leader_) &&
         same_doubles(a.access_, b.access_) && same_doubles(a.dist_, b.dist_) &&
         a.metadata == b.metadata;
}

}  // namespace mcfod
