#pragma once

#include <map>
#include <span>
#include <vector>

#include "mcfod/instance.hpp"

namespace mcfod {

// Per-commodity, per-hub fees. p rows exist only for non-hub origins and
// q rows only for non-hub destinations.
class FeeSchedule {
 public:
  FeeSchedule() = default;
  static FeeSchedule zeros(const Instance& inst);

  int commodity_count() const { return R_; }
  int hub_count() const { return h_; }
  bool has_p(int r) const { return has_p_[r] != 0; }
  bool has_q(int r) const { return has_q_[r] != 0; }
  double p(int r, int hi) const { return p_[static_cast<size_t>(r) * h_ + hi]; }
  double q(int r, int hi) const { return q_[static_cast<size_t>(r) * h_ + hi]; }
  std::span<const double> p_row(int r) const { return {p_.data() + static_cast<size_t>(r) * h_, static_cast<size_t>(h_)}; }
  std::span<const double> q_row(int r) const { return {q_.data() + static_cast<size_t>(r) * h_, static_cast<size_t>(h_)}; }
  void set_p(int r, int hi, double v);
  void set_q(int r, int hi, double v);

  // Shape and sign checks against an instance.
  void validate(const Instance& inst) const;

  friend bool operator==(const FeeSchedule&, const FeeSchedule&) = default;

 private:
  int R_ = 0;
  int h_ = 0;
  std::vector<double> p_, q_;
  std::vector<char> has_p_, has_q_;
};

// Carrier per non-hub position, kNone when unallocated.
struct Allocation {
  std::vector<int> assign;

  static Allocation none(const Instance& inst) {
    return Allocation{std::vector<int>(inst.non_hub_count(), kNone)};
  }
  // Carrier of a node; hubs and unallocated nodes give kNone.
  int of(const Instance& inst, int node) const {
    int pos = inst.non_hub_pos(node);
    return pos == kNone ? kNone : assign[pos];
  }
  friend bool operator==(const Allocation&, const Allocation&) = default;
};

struct HubPair {
  int i = 0;  // node ids
  int j = 0;
  friend bool operator==(const HubPair&, const HubPair&) = default;
};

struct LeaderSolution {
  Allocation allocation;
  std::vector<int> served;      // ascending commodity indices
  std::map<int, HubPair> route;  // one entry per served commodity
  FeeSchedule fees;
  double objective = 0;

  bool is_served(int r) const { return route.count(r) != 0; }
  double service_rate(const Instance& inst) const {
    return inst.commodity_count() == 0 ? 0.0 : 100.0 * served.size() / inst.commodity_count();
  }
};

}  // namespace mcfod
