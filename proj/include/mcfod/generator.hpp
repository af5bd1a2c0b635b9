#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mcfod/solution.hpp"

namespace mcfod {

// Uniform draws with a fixed mapping from the raw 64-bit stream, so another
// implementation seeded the same way reproduces the numbers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  std::uint64_t next() { return eng_(); }
  static constexpr const char* kName = "mt19937_64";

 private:
  std::mt19937_64 eng_;
};

// Indices are 0-based node positions; node id = index + 1.
struct RawData {
  std::vector<std::pair<double, double>> coords;
  std::vector<std::vector<double>> demand;
  std::vector<std::vector<double>> unit_cost;

  int size() const { return static_cast<int>(demand.size()); }
  void validate() const;
  // Node weight (outgoing + incoming) / 2, so weights sum to the total flow.
  std::vector<double> node_demand() const;
};

struct GenParams {
  double tau = 0.05;
  double mu = 0.6;
  double alpha = 0.5;
  std::pair<double, double> theta_range{0.6, 1.2};
  std::pair<double, double> chi_range{0.89, 0.99};
  double epsilon = 0.01;
  std::pair<double, double> phi_range{0.25, 0.35};
  int carriers = 3;
  std::uint64_t seed = 1;

  void validate() const;
  int hub_count(int n) const;
};

nlohmann::ordered_json params_to_json(const GenParams& p);
// Missing keys keep the values already in `base`.
GenParams params_from_json(const nlohmann::json& j, GenParams base = {});

// Coordinates in [0,100]^2, Euclidean unit costs, each ordered pair carrying
// demand U[1,10] with probability `density`.
RawData random_raw(int n, std::uint64_t seed, double density = 1.0);
// nodes.csv (id,x,y), demand.csv (o,d,w) and optionally unitcost.csv (i,j,c);
// Euclidean costs when unitcost.csv is absent.
RawData load_raw_csv(const std::filesystem::path& dir);

std::vector<int> select_hubs(const RawData& raw, const GenParams& params);
Instance build_instance(const RawData& raw, const std::vector<int>& hubs, const GenParams& params);

// random_raw + select_hubs + build_instance + complete_hub_network.
Instance generate(int n, const GenParams& params, double density = 1.0);

enum class FeeKind { Max, Avg };
FeeKind parse_fee_kind(const std::string& s);
std::string to_string(FeeKind k);
FeeSchedule make_fixed_fees(const Instance& inst, FeeKind kind);
// max_k reservation price scaled by U[lo,hi] per entry.
FeeSchedule make_random_fees(const Instance& inst, std::uint64_t seed, double lo = 0.7,
                             double hi = 1.3);

struct QsapInstance {
  int facilities = 0;
  int locations = 0;
  std::vector<std::vector<double>> w;  // facilities x facilities, diagonal ignored
  std::vector<std::vector<double>> d;  // locations x locations

  void validate() const;
  double cost(const std::vector<int>& map) const;
  // Exhaustive minimum over all |L|^|F| mappings.
  double optimum() const;
};

QsapInstance random_qsap(int facilities, int locations, std::uint64_t seed);
// Facilities become non-hubs 1..|F|, locations become carriers. Commodity r's
// cost under carriers (k,l) is exactly w_r * d_kl; revenue M = max + 1.
Instance reduce_qsap(const QsapInstance& q);
double qsap_big_m(const QsapInstance& q);

}  // namespace mcfod
