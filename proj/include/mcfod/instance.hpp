#pragma once

#include <optional>
#include <vector>

#include "json.hpp"
#include "mcfod/common.hpp"

namespace mcfod {

// Node ids are 1-based labels. Commodities, carriers and hub/non-hub
// positions are 0-based indices.
struct Commodity {
  int origin = 0;
  int destination = 0;
  double demand = 0;
  double revenue = 0;

  friend bool operator==(const Commodity&, const Commodity&) = default;
};

enum class CommodityStatus { Active, ResolvedHub, PrunedUnprofitable };

class Instance {
 public:
  Instance() = default;
  Instance(int node_count, std::vector<int> hubs, int carrier_count,
           std::vector<Commodity> commodities);

  int node_count() const { return n_; }
  int carrier_count() const { return k_; }
  int hub_count() const { return static_cast<int>(hubs_.size()); }
  int commodity_count() const { return static_cast<int>(commodities_.size()); }
  int non_hub_count() const { return static_cast<int>(non_hubs_.size()); }

  const std::vector<int>& hubs() const { return hubs_; }
  const std::vector<int>& non_hubs() const { return non_hubs_; }
  int hub_pos(int node) const { return valid_node(node) ? hub_pos_[node] : kNone; }
  int non_hub_pos(int node) const { return valid_node(node) ? non_hub_pos_[node] : kNone; }
  bool is_hub(int node) const { return hub_pos(node) != kNone; }
  bool valid_node(int node) const { return node >= 1 && node <= n_; }

  const std::vector<Commodity>& commodities() const { return commodities_; }
  const Commodity& commodity(int r) const { return commodities_[r]; }
  bool origin_is_hub(int r) const { return is_hub(commodities_[r].origin); }
  bool dest_is_hub(int r) const { return is_hub(commodities_[r].destination); }
  bool hub_to_hub(int r) const { return origin_is_hub(r) && dest_is_hub(r); }

  // c^r_ij by hub position; +inf marks a missing inter-hub arc.
  double leader_cost(int r, int hi, int hj) const { return leader_[lidx(r, hi, hj)]; }
  void set_leader_cost(int r, int hi, int hj, double c) { leader_[lidx(r, hi, hj)] = c; }

  // Reservation prices by (commodity, carrier, hub position). Absent arcs are NaN
  // in the raw accessors; prefer the optional forms outside hot loops.
  double access_raw(int r, int k, int hi) const { return access_[pidx(r, k, hi)]; }
  double dist_raw(int r, int k, int hi) const { return dist_[pidx(r, k, hi)]; }
  bool has_access(int r, int k, int hi) const { return !std::isnan(access_raw(r, k, hi)); }
  bool has_dist(int r, int k, int hi) const { return !std::isnan(dist_raw(r, k, hi)); }
  std::optional<double> access_price(int r, int k, int hi) const;
  std::optional<double> dist_price(int r, int k, int hi) const;
  void set_access_price(int r, int k, int hi, double c) { access_[pidx(r, k, hi)] = c; }
  void set_dist_price(int r, int k, int hi, double c) { dist_[pidx(r, k, hi)] = c; }
  void clear_access_price(int r, int k, int hi);
  void clear_dist_price(int r, int k, int hi);

  CommodityStatus status(int r) const { return status_[r]; }
  void set_status(int r, CommodityStatus s) { status_[r] = s; }

  // Throws ValidationError naming the offending field.
  void validate() const;

  // Every ordered hub pair has a finite cost for every commodity.
  bool hub_network_complete() const;
  // First violated triple as a message, or empty.
  std::string triangle_violation(double tol = kTol) const;

  nlohmann::json metadata = nlohmann::json::object();

  friend bool operator==(const Instance& a, const Instance& b);

 private:
  size_t lidx(int r, int hi, int hj) const {
    return (static_cast<size_t>(r) * hubs_.size() + hi) * hubs_.size() + hj;
  }
  size_t pidx(int r, int k, int hi) const {
    return (static_cast<size_t>(r) * k_ + k) * hubs_.size() + hi;
  }

  int n_ = 0;
  int k_ = 0;
  std::vector<int> hubs_;
  std::vector<int> non_hubs_;
  std::vector<int> hub_pos_;
  std::vector<int> non_hub_pos_;
  std::vector<Commodity> commodities_;
  std::vector<CommodityStatus> status_;
  std::vector<double> leader_;
  std::vector<double> access_;
  std::vector<double> dist_;
};

}  // namespace mcfod
