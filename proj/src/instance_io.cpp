#include "mcfod/instance_io.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

namespace mcfod {

using nlohmann::json;

namespace {

const json& field(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw ValidationError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(path + "." + key, "missing field");
  return *it;
}

int as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ValidationError(path, "expected an integer");
  return v.get<int>();
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ValidationError(path, "expected a number");
  return v.get<double>();
}

const json& array_field(const json& obj, const char* key, const std::string& path, bool required) {
  static const json empty = json::array();
  if (!obj.contains(key)) {
    if (required) throw ValidationError(path + key, "missing field");
    return empty;
  }
  const json& a = obj.at(key);
  if (!a.is_array()) throw ValidationError(path + key, "expected an array");
  return a;
}

std::string at(const char* key, size_t t) { return std::string(key) + "[" + std::to_string(t) + "]"; }

int commodity_ref(const json& e, const std::string& p, int R) {
  int r = as_int(field(e, "r", p), p + ".r");
  if (r < 1 || r > R) throw ValidationError(p + ".r", "commodity index out of range");
  return r - 1;
}

int hub_ref(const Instance& inst, const json& e, const char* key, const std::string& p) {
  int v = as_int(field(e, key, p), p + "." + key);
  int pos = inst.hub_pos(v);
  if (pos == kNone) throw ValidationError(p + "." + key, "node " + std::to_string(v) + " is not a hub");
  return pos;
}

int carrier_ref(const Instance& inst, const json& e, const std::string& p) {
  int k = as_int(field(e, "k", p), p + ".k");
  if (k < 1 || k > inst.carrier_count()) throw ValidationError(p + ".k", "carrier out of range");
  return k - 1;
}

const char* status_name(CommodityStatus s) {
  switch (s) {
    case CommodityStatus::Active: return "active";
    case CommodityStatus::ResolvedHub: return "resolved_hub";
    case CommodityStatus::PrunedUnprofitable: return "pruned";
  }
  return "active";
}

}  // namespace

Instance instance_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("$", "expected an object");
  int n = as_int(field(j, "nodes", "$"), "nodes");
  int K = as_int(field(j, "carriers", "$"), "carriers");
  std::vector<int> hubs;
  const json& hj = array_field(j, "hubs", "", true);
  for (size_t t = 0; t < hj.size(); ++t) hubs.push_back(as_int(hj[t], at("hubs", t)));

  std::vector<Commodity> coms;
  std::vector<std::string> tags;
  const json& cj = array_field(j, "commodities", "", true);
  for (size_t t = 0; t < cj.size(); ++t) {
    std::string p = at("commodities", t);
    const json& e = cj[t];
    Commodity c;
    c.origin = as_int(field(e, "o", p), p + ".o");
    c.destination = as_int(field(e, "d", p), p + ".d");
    c.demand = as_number(field(e, "w", p), p + ".w");
    c.revenue = as_number(field(e, "b", p), p + ".b");
    coms.push_back(c);
    tags.push_back(e.is_object() && e.contains("status") ? e.at("status").get<std::string>() : "active");
  }

  Instance inst(n, std::move(hubs), K, std::move(coms));
  const int R = inst.commodity_count();
  for (int r = 0; r < R; ++r) {
    if (tags[r] == "resolved_hub") inst.set_status(r, CommodityStatus::ResolvedHub);
    else if (tags[r] == "pruned") inst.set_status(r, CommodityStatus::PrunedUnprofitable);
    else if (tags[r] != "active") throw ValidationError(at("commodities", r) + ".status", "unknown status");
  }

  std::set<std::tuple<int, int, int>> seen;
  const json& lc = array_field(j, "leader_cost", "", false);
  for (size_t t = 0; t < lc.size(); ++t) {
    std::string p = at("leader_cost", t);
    int r = commodity_ref(lc[t], p, R);
    int hi = hub_ref(inst, lc[t], "i", p), hjp = hub_ref(inst, lc[t], "j", p);
    if (!seen.emplace(r, hi, hjp).second) throw ValidationError(p, "duplicate entry");
    inst.set_leader_cost(r, hi, hjp, as_number(field(lc[t], "c", p), p + ".c"));
  }
  for (const char* key : {"access_price", "dist_price"}) {
    seen.clear();
    const bool access = std::string(key) == "access_price";
    const json& arr = array_field(j, key, "", false);
    for (size_t t = 0; t < arr.size(); ++t) {
      std::string p = at(key, t);
      int r = commodity_ref(arr[t], p, R);
      int k = carrier_ref(inst, arr[t], p);
      int hi = hub_ref(inst, arr[t], "i", p);
      if (!seen.emplace(r, k, hi).second) throw ValidationError(p, "duplicate entry");
      if (access && inst.origin_is_hub(r)) throw ValidationError(p, "commodity origin is a hub");
      if (!access && inst.dest_is_hub(r)) throw ValidationError(p, "commodity destination is a hub");
      double c = as_number(field(arr[t], "c", p), p + ".c");
      if (access) inst.set_access_price(r, k, hi, c);
      else inst.set_dist_price(r, k, hi, c);
    }
  }
  if (j.contains("metadata")) {
    if (!j.at("metadata").is_object()) throw ValidationError("metadata", "expected an object");
    inst.metadata = j.at("metadata");
  }
  inst.validate();
  return inst;
}

ordered_json instance_to_json(const Instance& inst) {
  ordered_json j;
  j["nodes"] = inst.node_count();
  j["hubs"] = inst.hubs();
  j["carriers"] = inst.carrier_count();
  auto coms = ordered_json::array();
  for (int r = 0; r < inst.commodity_count(); ++r) {
    const auto& c = inst.commodity(r);
    ordered_json e{{"o", c.origin}, {"d", c.destination}, {"w", c.demand}, {"b", c.revenue}};
    if (inst.status(r) != CommodityStatus::Active) e["status"] = status_name(inst.status(r));
    coms.push_back(std::move(e));
  }
  j["commodities"] = std::move(coms);
  const auto& H = inst.hubs();
  auto lc = ordered_json::array();
  auto ap = ordered_json::array();
  auto dp = ordered_json::array();
  for (int r = 0; r < inst.commodity_count(); ++r) {
    for (int i = 0; i < inst.hub_count(); ++i)
      for (int jj = 0; jj < inst.hub_count(); ++jj) {
        double c = inst.leader_cost(r, i, jj);
        if (std::isfinite(c)) lc.push_back({{"r", r + 1}, {"i", H[i]}, {"j", H[jj]}, {"c", c}});
      }
    for (int k = 0; k < inst.carrier_count(); ++k)
      for (int i = 0; i < inst.hub_count(); ++i) {
        if (inst.has_access(r, k, i))
          ap.push_back({{"r", r + 1}, {"k", k + 1}, {"i", H[i]}, {"c", inst.access_raw(r, k, i)}});
        if (inst.has_dist(r, k, i))
          dp.push_back({{"r", r + 1}, {"k", k + 1}, {"i", H[i]}, {"c", inst.dist_raw(r, k, i)}});
      }
  }
  j["leader_cost"] = std::move(lc);
  j["access_price"] = std::move(ap);
  j["dist_price"] = std::move(dp);
  j["metadata"] = ordered_json(inst.metadata);
  return j;
}

std::string dump_lines(const ordered_json& j) {
  std::string out = "{\n";
  size_t t = 0;
  for (auto it = j.begin(); it != j.end(); ++it, ++t) {
    out += "  " + ordered_json(it.key()).dump() + ": ";
    const auto& v = it.value();
    if (v.is_array() && !v.empty() && v.front().is_structured()) {
      out += "[\n";
      for (size_t e = 0; e < v.size(); ++e) {
        out += "    " + v[e].dump();
        out += e + 1 < v.size() ? ",\n" : "\n";
      }
      out += "  ]";
    } else {
      out += v.dump();
    }
    out += t + 1 < j.size() ? ",\n" : "\n";
  }
  out += "}\n";
  return out;
}

std::string instance_to_text(const Instance& inst) { return dump_lines(instance_to_json(inst)); }

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

static json parse_json_file(const std::filesystem::path& path) {
  std::string text = read_text(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

Instance load_instance(const std::filesystem::path& path) {
  json j = parse_json_file(path);
  try {
    return instance_from_json(j);
  } catch (const json::exception& e) {
    throw ValidationError(path.string(), e.what());
  }
}

void save_instance(const Instance& inst, const std::filesystem::path& path) {
  write_text(path, instance_to_text(inst));
}

FeeSchedule fees_from_json(const Instance& inst, const json& j) {
  FeeSchedule fees = FeeSchedule::zeros(inst);
  if (!j.is_object()) throw ValidationError("fees", "expected an object");
  for (const char* key : {"p", "q"}) {
    const bool first = key[0] == 'p';
    const json& arr = array_field(j, key, "", false);
    std::set<std::pair<int, int>> seen;
    for (size_t t = 0; t < arr.size(); ++t) {
      std::string p = at(key, t);
      int r = commodity_ref(arr[t], p, inst.commodity_count());
      int hi = hub_ref(inst, arr[t], "i", p);
      if (!seen.emplace(r, hi).second) throw ValidationError(p, "duplicate entry");
      double v = as_number(field(arr[t], "fee", p), p + ".fee");
      if (first && inst.origin_is_hub(r)) throw ValidationError(p, "fee entry for a hub-origin commodity");
      if (!first && inst.dest_is_hub(r)) throw ValidationError(p, "fee entry for a hub-destination commodity");
      if (!(v >= 0)) throw ValidationError(p + ".fee", "fee must be >= 0");
      if (first) fees.set_p(r, hi, v);
      else fees.set_q(r, hi, v);
    }
  }
  return fees;
}

ordered_json fees_to_json(const Instance& inst, const FeeSchedule& fees) {
  ordered_json j;
  auto p = ordered_json::array(), q = ordered_json::array();
  for (int r = 0; r < inst.commodity_count(); ++r)
    for (int i = 0; i < inst.hub_count(); ++i) {
      if (fees.has_p(r)) p.push_back({{"r", r + 1}, {"i", inst.hubs()[i]}, {"fee", fees.p(r, i)}});
      if (fees.has_q(r)) q.push_back({{"r", r + 1}, {"i", inst.hubs()[i]}, {"fee", fees.q(r, i)}});
    }
  j["p"] = std::move(p);
  j["q"] = std::move(q);
  return j;
}

FeeSchedule load_fees(const Instance& inst, const std::filesystem::path& path) {
  json j = parse_json_file(path);
  try {
    return fees_from_json(inst, j);
  } catch (const json::exception& e) {
    throw ValidationError(path.string(), e.what());
  }
}

void save_fees(const Instance& inst, const FeeSchedule& fees, const std::filesystem::path& path) {
  write_text(path, dump_lines(fees_to_json(inst, fees)));
}

std::string fees_to_csv(const Instance& inst, const FeeSchedule& fees, bool all) {
  std::ostringstream out;
  out.precision(17);
  out << "r,leg,hub,fee\n";
  for (int r = 0; r < inst.commodity_count(); ++r) {
    for (int i = 0; i < inst.hub_count(); ++i)
      if (fees.has_p(r) && (all || fees.p(r, i) != 0))
        out << r + 1 << ",first," << inst.hubs()[i] << "," << fees.p(r, i) << "\n";
    for (int i = 0; i < inst.hub_count(); ++i)
      if (fees.has_q(r) && (all || fees.q(r, i) != 0))
        out << r + 1 << ",third," << inst.hubs()[i] << "," << fees.q(r, i) << "\n";
  }
  return out.str();
}

ordered_json solution_to_json(const Instance& inst, const LeaderSolution& sol) {
  ordered_json j;
  j["objective"] = sol.objective;
  auto alloc = ordered_json::array();
  for (int p = 0; p < inst.non_hub_count(); ++p)
    alloc.push_back({{"node", inst.non_hubs()[p]}, {"carrier", sol.allocation.assign[p] + 1}});
  j["allocation"] = std::move(alloc);
  auto served = ordered_json::array();
  for (const auto& [r, hp] : sol.route) served.push_back({{"r", r + 1}, {"i", hp.i}, {"j", hp.j}});
  j["served"] = std::move(served);
  j["fees"] = fees_to_json(inst, sol.fees);
  return j;
}

LeaderSolution solution_from_json(const Instance& inst, const json& j) {
  LeaderSolution sol;
  sol.allocation = Allocation::none(inst);
  sol.objective = as_number(field(j, "objective", "$"), "objective");
  const json& alloc = array_field(j, "allocation", "", false);
  for (size_t t = 0; t < alloc.size(); ++t) {
    std::string p = at("allocation", t);
    int node = as_int(field(alloc[t], "node", p), p + ".node");
    int k = as_int(field(alloc[t], "carrier", p), p + ".carrier");
    int pos = inst.non_hub_pos(node);
    if (pos == kNone) throw ValidationError(p + ".node", "not a non-hub node");
    if (k < 0 || k > inst.carrier_count()) throw ValidationError(p + ".carrier", "carrier out of range");
    sol.allocation.assign[pos] = k - 1;
  }
  const json& served = array_field(j, "served", "", false);
  for (size_t t = 0; t < served.size(); ++t) {
    std::string p = at("served", t);
    int r = commodity_ref(served[t], p, inst.commodity_count());
    HubPair hp{as_int(field(served[t], "i", p), p + ".i"), as_int(field(served[t], "j", p), p + ".j")};
    sol.route[r] = hp;
  }
  for (const auto& [r, hp] : sol.route) sol.served.push_back(r);
  sol.fees = j.contains("fees") ? fees_from_json(inst, j.at("fees")) : FeeSchedule::zeros(inst);
  return sol;
}

}  // namespace mcfod
