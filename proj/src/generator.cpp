#include "mcfod/generator.hpp"

#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>

#include "mcfod/instance_io.hpp"
#include "mcfod/preprocess.hpp"

namespace mcfod {

void RawData::validate() const {
  const size_t n = demand.size();
  if (coords.size() != n) throw ValidationError("coords", "expected " + std::to_string(n) + " nodes");
  if (unit_cost.size() != n) throw ValidationError("unit_cost", "dimension mismatch");
  for (size_t i = 0; i < n; ++i) {
    if (demand[i].size() != n) throw ValidationError("demand[" + std::to_string(i) + "]", "not square");
    if (unit_cost[i].size() != n) throw ValidationError("unit_cost[" + std::to_string(i) + "]", "not square");
    if (unit_cost[i][i] != 0) throw ValidationError("unit_cost[" + std::to_string(i) + "]", "nonzero diagonal");
    for (size_t j = 0; j < n; ++j) {
      if (!(unit_cost[i][j] >= 0) || !std::isfinite(unit_cost[i][j]))
        throw ValidationError("unit_cost", "negative or non-finite entry");
      if (!(demand[i][j] >= 0) || !std::isfinite(demand[i][j]))
        throw ValidationError("demand", "negative or non-finite entry");
    }
  }
}

std::vector<double> RawData::node_demand() const {
  const int n = size();
  std::vector<double> out(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      out[i] += 0.5 * demand[i][j];
      out[j] += 0.5 * demand[i][j];
    }
  return out;
}

void GenParams::validate() const {
  if (!(tau > 0 && tau <= 1)) throw ValidationError("tau", "must lie in (0,1]");
  if (!(mu > 0 && mu <= 1)) throw ValidationError("mu", "must lie in (0,1]");
  if (!(alpha >= 0)) throw ValidationError("alpha", "must be nonnegative");
  if (!(epsilon >= 0)) throw ValidationError("epsilon", "must be nonnegative");
  auto range = [](const char* name, std::pair<double, double> r) {
    if (!(r.first > 0 && r.first <= r.second)) throw ValidationError(name, "range must satisfy 0 < lo <= hi");
  };
  range("theta_range", theta_range);
  range("chi_range", chi_range);
  range("phi_range", phi_range);
  if (carriers < 1) throw ValidationError("carriers", "need at least one carrier");
}

int GenParams::hub_count(int n) const {
  // Guard against tau*n landing a hair above an integer.
  return std::max(1, static_cast<int>(std::ceil(tau * n - 1e-9)));
}

nlohmann::ordered_json params_to_json(const GenParams& p) {
  nlohmann::ordered_json j;
  j["tau"] = p.tau;
  j["mu"] = p.mu;
  j["alpha"] = p.alpha;
  j["theta_range"] = {p.theta_range.first, p.theta_range.second};
  j["chi_range"] = {p.chi_range.first, p.chi_range.second};
  j["epsilon"] = p.epsilon;
  j["phi_range"] = {p.phi_range.first, p.phi_range.second};
  j["carriers"] = p.carriers;
  j["seed"] = p.seed;
  return j;
}

GenParams params_from_json(const nlohmann::json& j, GenParams p) {
  if (!j.is_object()) throw ParseError("generator params must be a JSON object");
  auto range = [&](const char* key, std::pair<double, double>& r) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (!v.is_array() || v.size() != 2) throw ValidationError(key, "expected [lo, hi]");
    r = {v[0].get<double>(), v[1].get<double>()};
  };
  try {
    if (j.contains("tau")) p.tau = j.at("tau").get<double>();
    if (j.contains("mu")) p.mu = j.at("mu").get<double>();
    if (j.contains("alpha")) p.alpha = j.at("alpha").get<double>();
    if (j.contains("epsilon")) p.epsilon = j.at("epsilon").get<double>();
    if (j.contains("carriers")) p.carriers = j.at("carriers").get<int>();
    if (j.contains("seed")) p.seed = j.at("seed").get<std::uint64_t>();
    range("theta_range", p.theta_range);
    range("chi_range", p.chi_range);
    range("phi_range", p.phi_range);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("generator params: ") + e.what());
  }
  p.validate();
  return p;
}

namespace {

std::vector<std::vector<double>> euclidean(const std::vector<std::pair<double, double>>& xy) {
  const size_t n = xy.size();
  std::vector<std::vector<double>> c(n, std::vector<double>(n, 0.0));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (i != j) c[i][j] = std::hypot(xy[i].first - xy[j].first, xy[i].second - xy[j].second);
  return c;
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
  std::istringstream in(read_text(path));
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

double to_num(const std::string& s, const std::filesystem::path& file, size_t line) {
  size_t b = s.find_first_not_of(" \t"), e = s.find_last_not_of(" \t");
  std::string t = b == std::string::npos ? "" : s.substr(b, e - b + 1);
  double v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    throw ParseError(file.string() + ":" + std::to_string(line) + ": not a number: '" + s + "'");
  return v;
}

// Skips a header row when its first cell is not numeric.
template <class Fn>
void each_row(const std::filesystem::path& path, size_t width, Fn fn) {
  auto rows = read_csv(path);
  for (size_t i = 0; i < rows.size(); ++i) {
    if (i == 0 && !rows[i].empty()) {
      const std::string& c = rows[i][0];
      double tmp;
      auto b = c.find_first_not_of(" \t");
      if (b == std::string::npos || std::from_chars(c.data() + b, c.data() + c.size(), tmp).ec != std::errc())
        continue;
    }
    if (rows[i].size() != width)
      throw ParseError(path.string() + ":" + std::to_string(i + 1) + ": expected " + std::to_string(width) + " columns");
    std::vector<double> v;
    for (const auto& c : rows[i]) v.push_back(to_num(c, path, i + 1));
    fn(v, i + 1);
  }
}

int node_index(double id, int n, const std::filesystem::path& path, size_t line) {
  if (id != std::floor(id) || id < 1 || id > n)
    throw ValidationError(path.filename().string() + ":" + std::to_string(line), "bad node id");
  return static_cast<int>(id) - 1;
}

}  // namespace

RawData random_raw(int n, std::uint64_t seed, double density) {
  if (n < 2) throw ValidationError("n", "need at least two nodes");
  Rng rng(seed);
  RawData raw;
  raw.coords.resize(n);
  for (auto& [x, y] : raw.coords) {
    x = rng.uniform(0, 100);
    y = rng.uniform(0, 100);
  }
  raw.demand.assign(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      double keep = rng.unit();
      double w = rng.uniform(1, 10);
      if (keep < density) raw.demand[i][j] = w;
    }
  raw.unit_cost = euclidean(raw.coords);
  return raw;
}

RawData load_raw_csv(const std::filesystem::path& dir) {
  RawData raw;
  std::vector<std::pair<int, std::pair<double, double>>> nodes;
  each_row(dir / "nodes.csv", 3, [&](const std::vector<double>& v, size_t line) {
    if (v[0] != std::floor(v[0]) || v[0] < 1) throw ValidationError("nodes.csv:" + std::to_string(line), "bad node id");
    nodes.push_back({static_cast<int>(v[0]), {v[1], v[2]}});
  });
  std::sort(nodes.begin(), nodes.end());
  const int n = static_cast<int>(nodes.size());
  for (int i = 0; i < n; ++i)
    if (nodes[i].first != i + 1) throw ValidationError("nodes.csv", "ids must be exactly 1..n");
  for (const auto& nd : nodes) raw.coords.push_back(nd.second);
  raw.demand.assign(n, std::vector<double>(n, 0.0));
  each_row(dir / "demand.csv", 3, [&](const std::vector<double>& v, size_t line) {
    raw.demand[node_index(v[0], n, dir / "demand.csv", line)][node_index(v[1], n, dir / "demand.csv", line)] = v[2];
  });
  if (std::filesystem::exists(dir / "unitcost.csv")) {
    raw.unit_cost.assign(n, std::vector<double>(n, 0.0));
    each_row(dir / "unitcost.csv", 3, [&](const std::vector<double>& v, size_t line) {
      raw.unit_cost[node_index(v[0], n, dir / "unitcost.csv", line)][node_index(v[1], n, dir / "unitcost.csv", line)] = v[2];
    });
  } else {
    raw.unit_cost = euclidean(raw.coords);
  }
  raw.validate();
  return raw;
}

std::vector<int> select_hubs(const RawData& raw, const GenParams& params) {
  raw.validate();
  const int n = raw.size();
  const int h = std::min(n, params.hub_count(n));
  const auto wnode = raw.node_demand();
  const double W = std::accumulate(wnode.begin(), wnode.end(), 0.0);

  double cx = 0, cy = 0;
  if (W > 0) {
    for (int i = 0; i < n; ++i) {
      cx += wnode[i] * raw.coords[i].first;
      cy += wnode[i] * raw.coords[i].second;
    }
    cx /= W;
    cy /= W;
  } else {
    for (const auto& [x, y] : raw.coords) {
      cx += x / n;
      cy += y / n;
    }
  }
  double dmax = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      dmax = std::max(dmax, std::hypot(raw.coords[i].first - raw.coords[j].first,
                                       raw.coords[i].second - raw.coords[j].second));
  std::vector<double> dist(n);
  for (int i = 0; i < n; ++i) dist[i] = std::hypot(raw.coords[i].first - cx, raw.coords[i].second - cy);

  const double step = dmax > 0 ? 0.01 * dmax : 1.0;
  std::vector<int> inside;
  for (int t = 0;; ++t) {
    const double radius = t * step;
    inside.clear();
    double covered = 0;
    for (int i = 0; i < n; ++i)
      if (dist[i] <= radius * (1 + 1e-12)) {
        inside.push_back(i);
        covered += wnode[i];
      }
    if (static_cast<int>(inside.size()) >= h && covered >= params.mu * W * (1 - 1e-12)) break;
    if (static_cast<int>(inside.size()) == n) break;
  }
  std::stable_sort(inside.begin(), inside.end(), [&](int a, int b) { return wnode[a] > wnode[b]; });
  std::vector<int> hubs;
  for (int t = 0; t < h; ++t) hubs.push_back(inside[t] + 1);
  std::sort(hubs.begin(), hubs.end());
  return hubs;
}

Instance build_instance(const RawData& raw, const std::vector<int>& hub_ids, const GenParams& params) {
  raw.validate();
  params.validate();
  const int n = raw.size(), K = params.carriers;
  std::vector<Commodity> coms;
  for (int o = 0; o < n; ++o)
    for (int d = 0; d < n; ++d)
      if (o != d && raw.demand[o][d] > 0) coms.push_back({o + 1, d + 1, raw.demand[o][d], 1.0});

  Instance probe(n, hub_ids, K, {});
  const auto& hubs = probe.hubs();
  const auto& non_hubs = probe.non_hubs();
  const int h = static_cast<int>(hubs.size());
  Rng rng(params.seed);

  // theta[k][non-hub position]
  std::vector<std::vector<double>> theta(K, std::vector<double>(non_hubs.size()));
  for (int k = 0; k < K; ++k)
    for (size_t v = 0; v < non_hubs.size(); ++v)
      theta[k][v] = rng.uniform(params.theta_range.first, params.theta_range.second);

  // One chi per access (non-hub -> hub) or distribution (hub -> non-hub) arc,
  // drawn in lexicographic (tail, head) order.
  std::vector<std::vector<double>> chi(n + 1, std::vector<double>(n + 1, 0.0));
  for (int a = 1; a <= n; ++a)
    for (int b = 1; b <= n; ++b)
      if (probe.is_hub(a) != probe.is_hub(b))
        chi[a][b] = rng.uniform(params.chi_range.first, params.chi_range.second);

  std::vector<double> phi(coms.size());
  for (auto& f : phi) f = rng.uniform(params.phi_range.first, params.phi_range.second);

  const auto& C = raw.unit_cost;
  for (size_t r = 0; r < coms.size(); ++r) {
    const int o = coms[r].origin - 1, d = coms[r].destination - 1;
    double lam = 0;
    for (int i = 0; i < h; ++i)
      for (int j = 0; j < h; ++j)
        lam += C[o][hubs[i] - 1] + params.alpha * C[hubs[i] - 1][hubs[j] - 1] + C[hubs[j] - 1][d];
    coms[r].revenue = coms[r].demand * phi[r] * lam / (static_cast<double>(h) * h);
  }

  Instance inst(n, hub_ids, K, coms);
  for (int r = 0; r < inst.commodity_count(); ++r) {
    const auto& com = inst.commodity(r);
    const double w = com.demand;
    for (int i = 0; i < h; ++i)
      for (int j = 0; j < h; ++j)
        inst.set_leader_cost(r, i, j, w * params.alpha * C[hubs[i] - 1][hubs[j] - 1]);
    const int o = com.origin, d = com.destination;
    for (int k = 0; k < K; ++k)
      for (int i = 0; i < h; ++i) {
        const int hub = hubs[i];
        if (!inst.is_hub(o))
          inst.set_access_price(r, k, i,
                                w * theta[k][inst.non_hub_pos(o)] * chi[o][hub] * C[o - 1][hub - 1] *
                                    (1 + params.epsilon));
        if (!inst.is_hub(d))
          inst.set_dist_price(r, k, i,
                              w * theta[k][inst.non_hub_pos(d)] * chi[hub][d] * C[hub - 1][d - 1] *
                                  (1 + params.epsilon));
      }
  }
  inst.metadata["generator"] = Rng::kName;
  inst.metadata["seed"] = params.seed;
  inst.metadata["params"] = params_to_json(params);
  inst.validate();
  return inst;
}

Instance generate(int n, const GenParams& params, double density) {
  // Raw data and instance draws use independent streams of the same seed.
  RawData raw = random_raw(n, params.seed ^ 0x9e3779b97f4a7c15ULL, density);
  Instance inst = complete_hub_network(build_instance(raw, select_hubs(raw, params), params));
  inst.metadata["n"] = n;
  inst.metadata["density"] = density;
  return inst;
}

FeeKind parse_fee_kind(const std::string& s) {
  std::string u = s;
  for (auto& c : u) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (u == "MAX") return FeeKind::Max;
  if (u == "AVG" || u == "AVERAGE") return FeeKind::Avg;
  throw ParseError("unknown fee kind '" + s + "' (expected MAX or AVG)");
}

std::string to_string(FeeKind k) { return k == FeeKind::Max ? "MAX" : "AVG"; }

FeeSchedule make_fixed_fees(const Instance& inst, FeeKind kind) {
  if (inst.carrier_count() < 1) throw ValidationError("carriers", "need at least one carrier");
  FeeSchedule fees = FeeSchedule::zeros(inst);
  const int K = inst.carrier_count();
  auto pick = [&](auto present, auto price) {
    double mx = 0, sum = 0;
    int cnt = 0;
    for (int k = 0; k < K; ++k) {
      if (!present(k)) continue;
      mx = std::max(mx, price(k));
      sum += price(k);
      ++cnt;
    }
    if (cnt == 0) return 0.0;
    return kind == FeeKind::Max ? mx : sum / cnt;
  };
  for (int r = 0; r < inst.commodity_count(); ++r)
    for (int i = 0; i < inst.hub_count(); ++i) {
      if (fees.has_p(r))
        fees.set_p(r, i, pick([&](int k) { return inst.has_access(r, k, i); },
                              [&](int k) { return inst.access_raw(r, k, i); }));
      if (fees.has_q(r))
        fees.set_q(r, i, pick([&](int k) { return inst.has_dist(r, k, i); },
                              [&](int k) { return inst.dist_raw(r, k, i); }));
    }
  return fees;
}

FeeSchedule make_random_fees(const Instance& inst, std::uint64_t seed, double lo, double hi) {
  FeeSchedule mx = make_fixed_fees(inst, FeeKind::Max);
  FeeSchedule fees = FeeSchedule::zeros(inst);
  Rng rng(seed);
  for (int r = 0; r < inst.commodity_count(); ++r)
    for (int i = 0; i < inst.hub_count(); ++i) {
      if (fees.has_p(r)) fees.set_p(r, i, mx.p(r, i) * rng.uniform(lo, hi));
      if (fees.has_q(r)) fees.set_q(r, i, mx.q(r, i) * rng.uniform(lo, hi));
    }
  return fees;
}

void QsapInstance::validate() const {
  if (facilities < 0 || locations < 1) throw ValidationError("qsap", "need |L| >= 1");
  if (static_cast<int>(w.size()) != facilities) throw ValidationError("qsap.w", "dimension mismatch");
  if (static_cast<int>(d.size()) != locations) throw ValidationError("qsap.d", "dimension mismatch");
  for (int i = 0; i < facilities; ++i) {
    if (static_cast<int>(w[i].size()) != facilities) throw ValidationError("qsap.w", "not square");
    for (int j = 0; j < facilities; ++j)
      if (i != j && !(w[i][j] > 0)) throw ValidationError("qsap.w", "weights must be positive");
  }
  for (const auto& row : d) {
    if (static_cast<int>(row.size()) != locations) throw ValidationError("qsap.d", "not square");
    for (double v : row)
      if (!(v >= 0)) throw ValidationError("qsap.d", "distances must be nonnegative");
  }
}

double QsapInstance::cost(const std::vector<int>& map) const {
  double c = 0;
  for (int i = 0; i < facilities; ++i)
    for (int j = 0; j < facilities; ++j)
      if (i != j) c += w[i][j] * d[map[i]][map[j]];
  return c;
}

double QsapInstance::optimum() const {
  std::vector<int> map(facilities, 0);
  double best = facilities > 0 ? kInf : 0.0;
  if (facilities == 0) return best;
  while (true) {
    best = std::min(best, cost(map));
    int pos = facilities - 1;
    while (pos >= 0 && map[pos] == locations - 1) map[pos--] = 0;
    if (pos < 0) break;
    ++map[pos];
  }
  return best;
}

QsapInstance random_qsap(int facilities, int locations, std::uint64_t seed) {
  Rng rng(seed);
  QsapInstance q;
  q.facilities = facilities;
  q.locations = locations;
  // Small integers keep every derived quantity exact in binary floating point.
  auto draw = [&](int lo, int hi) { return static_cast<double>(lo + static_cast<int>(rng.unit() * (hi - lo + 1))); };
  q.w.assign(facilities, std::vector<double>(facilities, 0.0));
  for (int i = 0; i < facilities; ++i)
    for (int j = 0; j < facilities; ++j)
      if (i != j) q.w[i][j] = draw(1, 5);
  q.d.assign(locations, std::vector<double>(locations, 0.0));
  for (int k = 0; k < locations; ++k)
    for (int l = 0; l < locations; ++l)
      if (k != l) q.d[k][l] = draw(1, 9);
  return q;
}

double qsap_big_m(const QsapInstance& q) {
  double mx = 0;
  for (int i = 0; i < q.facilities; ++i)
    for (int j = 0; j < q.facilities; ++j)
      if (i != j)
        for (const auto& row : q.d)
          for (double v : row) mx = std::max(mx, q.w[i][j] * v);
  return mx + 1;
}

Instance reduce_qsap(const QsapInstance& q) {
  q.validate();
  const int F = q.facilities, L = q.locations;
  const double M = qsap_big_m(q);
  // Hub v_kl (node F + 1 + k*L + l) is the only place where carrier k's
  // access leg and carrier l's distribution leg are both cheap.
  std::vector<int> hubs;
  for (int t = 0; t < L * L; ++t) hubs.push_back(F + 1 + t);
  std::vector<Commodity> coms;
  for (int o = 0; o < F; ++o)
    for (int d = 0; d < F; ++d)
      if (o != d) coms.push_back({o + 1, d + 1, q.w[o][d], M});
  Instance inst(F + L * L, hubs, L, coms);
  for (int r = 0; r < inst.commodity_count(); ++r) {
    const double w = coms[r].demand;
    for (int a = 0; a < L * L; ++a) {
      for (int b = 0; b < L * L; ++b) inst.set_leader_cost(r, a, b, a == b ? 0.0 : M);
      const int hk = a / L, hl = a % L;
      for (int k = 0; k < L; ++k) {
        inst.set_access_price(r, k, a, k == hk ? 0.5 * w * q.d[hk][hl] : M);
        inst.set_dist_price(r, k, a, k == hl ? 0.5 * w * q.d[hk][hl] : M);
      }
    }
  }
  inst.metadata["source"] = "qsap";
  inst.metadata["big_m"] = M;
  inst.validate();
  return inst;
}

}  // namespace mcfod
