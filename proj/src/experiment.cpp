#include "mcfod/experiment.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <functional>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <thread>

#include "mcfod/exact.hpp"
#include "mcfod/follower.hpp"
#include "mcfod/instance_io.hpp"
#include "mcfod/milp/solve.hpp"

namespace mcfod {

using nlohmann::json;

namespace {

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

const char* fee_source_name(FeeSource f) {
  switch (f) {
    case FeeSource::None: return "";
    case FeeSource::Max: return "MAX";
    case FeeSource::Avg: return "AVG";
    case FeeSource::File: return "FILE";
  }
  return "";
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

struct Prepared {
  std::string id;
  Instance original;
  Instance inst;
  std::optional<FeeSchedule> file_fees;
  double prep_seconds = 0;
  std::string error;
};

Prepared prepare(const ExperimentSpec& spec, const std::string& id,
                 const std::function<Instance()>& load, const std::filesystem::path& fees_path) {
  Prepared p;
  p.id = id;
  try {
    p.original = load();
    if (!fees_path.empty()) p.file_fees = load_fees(p.original, fees_path);
    auto t0 = std::chrono::steady_clock::now();
    p.inst = p.original;
    if (spec.preprocess) {
      if (!p.inst.hub_network_complete()) p.inst = complete_hub_network(p.inst);
      HubRemoval hr = remove_redundant_hubs(p.inst);
      if (p.file_fees && !hr.removed.empty()) p.file_fees = restrict_fees(p.inst, hr, *p.file_fees);
      p.inst = resolve_hub_commodities(hr.instance).instance;
    }
    p.prep_seconds = seconds_since(t0);
  } catch (const Error& e) {
    p.error = e.what();
  }
  return p;
}

std::vector<ResultRow> run_pair(const ExperimentSpec& spec, const Prepared& p, const VariantSpec& vs,
                                const std::string& solver_cmd) {
  std::vector<ResultRow> rows;
  ResultRow base;
  base.instance = p.id;
  base.nodes = p.original.node_count();
  base.carriers = p.original.carrier_count();
  base.hubs = p.original.hub_count();
  base.variant = vs.label();
  base.total = p.original.commodity_count();
  auto fail_all = [&](const std::string& status, const std::string& note) {
    for (Method m : spec.methods) {
      ResultRow r = base;
      r.method = to_string(m);
      r.status = status;
      r.note = note;
      rows.push_back(r);
    }
    return rows;
  };
  if (!p.error.empty()) return fail_all("ERROR", p.error);

  std::optional<FeeSchedule> fees;
  PreprocessedCosts costs;
  Instance work;
  double prep = p.prep_seconds;
  try {
    auto t0 = std::chrono::steady_clock::now();
    switch (vs.fees) {
      case FeeSource::None: break;
      case FeeSource::Max: fees = make_fixed_fees(p.inst, FeeKind::Max); break;
      case FeeSource::Avg: fees = make_fixed_fees(p.inst, FeeKind::Avg); break;
      case FeeSource::File:
        if (!p.file_fees) throw Error("no fee file for instance " + p.id);
        fees = p.file_fees;
        break;
    }
    const FeeSchedule* fp = fees ? &*fees : nullptr;
    costs = compute_costs(p.inst, vs.variant, fp);
    work = spec.preprocess ? apply_prune(p.inst, prune_unprofitable(costs, p.inst)) : p.inst;
    prep += seconds_since(t0);
  } catch (const Error& e) {
    return fail_all("ERROR", e.what());
  }
  const FeeSchedule* fp = fees ? &*fees : nullptr;

  for (Method m : spec.methods) {
    ResultRow row = base;
    row.method = to_string(m);
    row.preprocess_seconds = prep;
    std::optional<LeaderSolution> sol;
    VerificationReport report;
    try {
      if (m == Method::Exact || m == Method::Bnb) {
        ExactOptions eo;
        eo.cap = spec.exact_cap;
        eo.threads = 1;
        eo.fixed_fees = fp;
        auto t0 = std::chrono::steady_clock::now();
        const bool bf = m == Method::Exact &&
                        static_cast<int>(relevant_non_hubs(work).size()) <= spec.exact_cap;
        if (m == Method::Exact && !bf) row.note = "above enumeration cap, branch and bound used";
        sol = bf ? brute_force(work, costs, eo) : branch_and_bound(work, costs, eo);
        row.solve_seconds = seconds_since(t0);
        report = verify_solution(work, *sol, vs.variant, fp);
        row.status = report.ok() ? "OPTIMAL" : "VERIFY_FAILED";
      } else {
        milp::MilpRunOptions mo;
        mo.formulation = m == Method::EP ? Formulation::EP
                         : m == Method::EF ? Formulation::EF
                         : m == Method::IF ? Formulation::IF
                                           : Formulation::IP;
        mo.variant = vs.variant;
        mo.build = spec.build;
        mo.solver_cmd = solver_cmd;
        mo.time_limit = spec.time_limit;
        auto run = milp::solve_milp(work, mo, fp, &costs);
        row.load_seconds = run.build_seconds;
        row.solve_seconds = run.solve_seconds;
        row.cuts = run.outcome.cuts_added;
        if (!run.error.empty()) {
          row.status = "ERROR";
          row.note = run.error;
        } else if (!run.outcome.has_solution()) {
          row.status = milp::to_string(run.outcome.status);
          row.note = run.outcome.message;
        } else {
          sol = run.solution;
          report = run.report;
          row.status = report.ok() ? milp::to_string(run.outcome.status) : "VERIFY_FAILED";
        }
      }
    } catch (const Error& e) {
      row.status = "ERROR";
      row.note = e.what();
    }
    if (sol) {
      row.objective = sol->objective;
      row.served = static_cast<int>(sol->served.size());
      row.service_rate = row.total == 0 ? 0.0 : 100.0 * row.served / row.total;
      if (!report.ok()) row.note = report.violations.front().check + ": " + report.violations.front().actual;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

bool is_milp(Method m) { return m != Method::Exact && m != Method::Bnb; }

}  // namespace

std::string VariantSpec::label() const {
  std::string s = to_string(variant);
  if (fees != FeeSource::None) s += std::string(":") + fee_source_name(fees);
  return s;
}

VariantSpec VariantSpec::parse(const std::string& text) {
  std::string s = upper(text);
  std::string fee;
  if (auto c = s.find_first_of(":("); c != std::string::npos) {
    fee = s.substr(c + 1);
    if (!fee.empty() && fee.back() == ')') fee.pop_back();
    s.resize(c);
  }
  VariantSpec v;
  v.variant = parse_variant(s);
  if (v.variant == Variant::Free) {
    if (!fee.empty()) throw ParseError("FREE takes no fee source: " + text);
    return v;
  }
  if (fee.empty() || fee == "FILE") v.fees = FeeSource::File;
  else if (fee == "MAX") v.fees = FeeSource::Max;
  else if (fee == "AVG") v.fees = FeeSource::Avg;
  else throw ParseError("unknown fee source in " + text);
  return v;
}

std::string to_string(Method m) {
  switch (m) {
    case Method::Exact: return "EXACT";
    case Method::Bnb: return "BNB";
    case Method::EP: return "EP";
    case Method::EF: return "EF";
    case Method::IF: return "IF";
    case Method::IP: return "IP";
  }
  return "?";
}

Method parse_method(const std::string& text) {
  std::string s = upper(text);
  if (s == "EXACT" || s == "BRUTE_FORCE") return Method::Exact;
  if (s == "BNB") return Method::Bnb;
  if (s == "EP") return Method::EP;
  if (s == "EF") return Method::EF;
  if (s == "IF") return Method::IF;
  if (s == "IP") return Method::IP;
  throw ParseError("unknown method '" + text + "'");
}

void ExperimentSpec::validate() const {
  std::size_t generated = 0;
  if (generate) {
    generated = generate->sizes.size() * generate->carriers.size() * generate->seeds.size();
    generate->params.validate();
    if (!(generate->density > 0 && generate->density <= 1))
      throw ValidationError("generate.density", "must be in (0, 1]");
    for (int n : generate->sizes)
      if (n < 2) throw ValidationError("generate.sizes", "sizes must be at least 2");
    for (int k : generate->carriers)
      if (k < 1) throw ValidationError("generate.carriers", "carrier counts must be positive");
  }
  if (instances.empty() && generated == 0) throw ValidationError("instances", "at least one instance is required");
  if (variants.empty()) throw ValidationError("variants", "at least one variant is required");
  if (methods.empty()) throw ValidationError("methods", "at least one method is required");
  if (!(time_limit > 0)) throw ValidationError("time_limit", "must be positive");
  if (exact_cap < 0 || exact_cap > 20) throw ValidationError("exact_cap", "must be in [0, 20]");
  for (const auto& v : variants) {
    if (v.fees != FeeSource::File) continue;
    if (generated > 0) throw ValidationError("variants", v.label() + " needs fee files; generated instances have none");
    for (const auto& s : instances)
      if (s.fees.empty()) throw ValidationError("instances", s.path.string() + " has no fee file for " + v.label());
  }
}

ExperimentSpec spec_from_json(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ValidationError("$", "expected an object");
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };
  ExperimentSpec s;
  try {
    if (j.contains("instances")) {
      for (const auto& e : j.at("instances")) {
        InstanceSource src;
        if (e.is_string()) {
          src.path = resolve(e.get<std::string>());
        } else {
          src.path = resolve(e.at("path").get<std::string>());
          if (e.contains("fees")) src.fees = resolve(e.at("fees").get<std::string>());
        }
        s.instances.push_back(src);
      }
    }
    if (j.contains("generate")) {
      const json& g = j.at("generate");
      GenerationMatrix m;
      m.sizes = g.at("sizes").get<std::vector<int>>();
      m.carriers = g.value("carriers", std::vector<int>{3});
      if (g.contains("seeds")) {
        if (g.at("seeds").is_number_integer()) {
          for (int t = 1; t <= g.at("seeds").get<int>(); ++t) m.seeds.push_back(t);
        } else {
          m.seeds = g.at("seeds").get<std::vector<std::uint64_t>>();
        }
      } else {
        m.seeds = {1};
      }
      m.density = g.value("density", 1.0);
      if (g.contains("params")) m.params = params_from_json(g.at("params"));
      s.generate = m;
    }
    for (const auto& v : j.value("variants", std::vector<std::string>{})) s.variants.push_back(VariantSpec::parse(v));
    for (const auto& m : j.value("methods", std::vector<std::string>{})) s.methods.push_back(parse_method(m));
    if (j.contains("build")) {
      const json& b = j.at("build");
      s.build.big_m = b.value("big_m", s.build.big_m);
      s.build.defer_cuts = b.value("defer_cuts", s.build.defer_cuts);
      s.build.prune_ip = b.value("prune_ip", s.build.prune_ip);
      s.build.ep_strengthen = b.value("ep_strengthen", s.build.ep_strengthen);
    }
    s.time_limit = j.value("time_limit", s.time_limit);
    s.solver_cmd = j.value("solver_cmd", s.solver_cmd);
    s.workers = j.value("workers", s.workers);
    s.preprocess = j.value("preprocess", s.preprocess);
    s.exact_cap = j.value("exact_cap", s.exact_cap);
    if (j.contains("output")) s.output = resolve(j.at("output").get<std::string>());
  } catch (const json::exception& e) {
    throw ValidationError("spec", e.what());
  }
  s.validate();
  return s;
}

ExperimentSpec load_spec(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return spec_from_json(j, path.parent_path().empty() ? "." : path.parent_path());
}

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  std::string solver_cmd;
  for (Method m : spec.methods)
    if (is_milp(m)) solver_cmd = milp::resolve_solver_cmd(spec.solver_cmd);

  struct Source {
    std::string id;
    std::function<Instance()> load;
    std::filesystem::path fees;
  };
  std::vector<Source> sources;
  for (const auto& s : spec.instances)
    sources.push_back({s.path.stem().string(), [p = s.path] { return load_instance(p); }, s.fees});
  if (spec.generate) {
    const auto& g = *spec.generate;
    for (int n : g.sizes)
      for (int k : g.carriers)
        for (auto seed : g.seeds) {
          GenParams params = g.params;
          params.carriers = k;
          params.seed = seed;
          std::string id = "gen_n" + std::to_string(n) + "_k" + std::to_string(k) + "_s" + std::to_string(seed);
          sources.push_back({id, [n, params, d = g.density] { return generate(n, params, d); }, {}});
        }
  }

  int workers = spec.workers;
  if (workers <= 0) workers = std::max(1, static_cast<int>(std::thread::hardware_concurrency()) / 2);

  std::vector<Prepared> prepared(sources.size());
  parallel_for(static_cast<int>(sources.size()), [&](int t) {
    prepared[t] = prepare(spec, sources[t].id, sources[t].load, sources[t].fees);
  }, workers);

  const int V = static_cast<int>(spec.variants.size());
  std::vector<std::vector<ResultRow>> parts(sources.size() * V);
  parallel_for(static_cast<int>(parts.size()), [&](int t) {
    parts[t] = run_pair(spec, prepared[t / V], spec.variants[t % V], solver_cmd);
  }, workers);

  std::vector<ResultRow> rows;
  for (auto& part : parts)
    for (auto& r : part) rows.push_back(std::move(r));
  if (!spec.output.empty()) write_text(spec.output, results_to_csv(rows));
  return rows;
}

std::string results_csv_header() {
  return "instance,nodes,carriers,hubs,variant,method,preprocess_s,load_s,solve_s,objective,status,"
         "served,total,service_rate,cuts,note";
}

std::string results_to_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  out << results_csv_header() << "\n";
  for (const auto& r : rows) {
    out << csv_field(r.instance) << ',' << r.nodes << ',' << r.carriers << ',' << r.hubs << ','
        << r.variant << ',' << r.method << ',' << fixed6(r.preprocess_seconds) << ','
        << fixed6(r.load_seconds) << ',' << fixed6(r.solve_seconds) << ','
        << (r.objective ? milp::format_number(*r.objective) : "") << ',' << r.status << ','
        << r.served << ',' << r.total << ',' << milp::format_number(r.service_rate) << ',' << r.cuts
        << ',' << csv_field(r.note) << "\n";
  }
  return out.str();
}

bool ServiceGroup::ordered() const {
  auto ge = [](double a, double b) { return std::isnan(a) || std::isnan(b) || approx_ge(a, b); };
  auto chain = [&](const double* v) { return ge(v[2], v[1]) && ge(v[1], v[0]) && ge(v[2], v[0]); };
  return chain(rate) && chain(profit);
}

bool ServiceGroup::complete() const {
  for (int c = 0; c < 3; ++c)
    if (std::isnan(rate[c]) || std::isnan(profit[c])) return false;
  return true;
}

std::vector<ServiceGroup> report_service_profit(const std::vector<ResultRow>& rows) {
  // Best verified row per (instance, variant label).
  struct Best {
    double rate, profit;
  };
  std::map<std::pair<std::string, std::string>, Best> best;
  std::map<std::string, int> size_of;
  std::vector<std::string> order;
  for (const auto& r : rows) {
    if (!r.objective || (r.status != "OPTIMAL" && r.status != "FEASIBLE")) continue;
    if (!size_of.count(r.instance)) order.push_back(r.instance);
    size_of[r.instance] = r.nodes;
    auto key = std::make_pair(r.instance, r.variant);
    auto it = best.find(key);
    if (it == best.end() || *r.objective > it->second.profit) best[key] = {r.service_rate, *r.objective};
  }

  std::vector<std::string> sources;
  for (const auto& [key, b] : best) {
    auto c = key.second.find(':');
    if (c == std::string::npos) continue;
    std::string src = key.second.substr(c + 1);
    if (std::find(sources.begin(), sources.end(), src) == sources.end()) sources.push_back(src);
  }
  std::sort(sources.begin(), sources.end(), [](const std::string& a, const std::string& b) {
    auto rank = [](const std::string& s) { return s == "MAX" ? 0 : s == "AVG" ? 1 : 2; };
    return rank(a) != rank(b) ? rank(a) < rank(b) : a < b;
  });
  if (sources.empty()) sources.push_back("");

  std::map<std::pair<int, std::string>, ServiceGroup> groups;
  std::map<std::pair<int, std::string>, std::array<int, 3>> counts;
  for (const auto& inst : order) {
    for (const auto& src : sources) {
      const std::string labels[3] = {"FIXED_OPTIMISTIC:" + src, "FIXED_RELAXED:" + src, "FREE"};
      bool any = false;
      auto gkey = std::make_pair(size_of[inst], src);
      auto& g = groups[gkey];
      auto& n = counts[gkey];
      g.size = gkey.first;
      g.fees = src;
      for (int c = 0; c < 3; ++c) {
        auto it = best.find({inst, labels[c]});
        if (it == best.end()) continue;
        any = true;
        g.rate[c] += it->second.rate;
        g.profit[c] += it->second.profit;
        ++n[c];
      }
      if (any) ++g.instances;
    }
  }
  std::vector<ServiceGroup> out;
  for (auto& [key, g] : groups) {
    if (g.instances == 0) continue;
    for (int c = 0; c < 3; ++c) {
      int n = counts[key][c];
      g.rate[c] = n ? g.rate[c] / n : std::nan("");
      g.profit[c] = n ? g.profit[c] / n : std::nan("");
    }
    out.push_back(g);
  }
  return out;
}

std::string service_report_csv(const std::vector<ServiceGroup>& groups) {
  std::ostringstream out;
  out << "nodes,fees,instances,rate_MCFOD_F,rate_rMCFOD_F,rate_MCFOD,profit_MCFOD_F,profit_rMCFOD_F,"
         "profit_MCFOD,ordered\n";
  auto num = [](double v) { return std::isnan(v) ? std::string() : fixed6(v); };
  for (const auto& g : groups) {
    out << g.size << ',' << g.fees << ',' << g.instances;
    for (double v : g.rate) out << ',' << num(v);
    for (double v : g.profit) out << ',' << num(v);
    out << ',' << (g.ordered() ? "yes" : "no") << "\n";
  }
  return out.str();
}

std::string service_report_svg(const std::vector<ServiceGroup>& groups) {
  const int bar = 18, gap = 30, left = 70, top = 30, height = 260;
  const int width = left + static_cast<int>(groups.size()) * (3 * bar + gap) + 150;
  double top_value = 0;
  for (const auto& g : groups)
    for (double v : g.profit)
      if (!std::isnan(v)) top_value = std::max(top_value, v);
  if (top_value <= 0) top_value = 1;
  const char* colors[3] = {"#4e79a7", "#f28e2b", "#59a14f"};
  const char* names[3] = {"MCFOD_F", "rMCFOD_F", "MCFOD"};

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << top + height + 60
    << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  s << "<text x=\"" << left << "\" y=\"18\">Average profit per size group</text>\n";
  s << "<line x1=\"" << left << "\" y1=\"" << top + height << "\" x2=\"" << width - 140 << "\" y2=\""
    << top + height << "\" stroke=\"black\"/>\n";
  s << "<text x=\"4\" y=\"" << top + 10 << "\">" << fixed6(top_value).substr(0, 10) << "</text>\n";
  for (std::size_t t = 0; t < groups.size(); ++t) {
    const auto& g = groups[t];
    int x0 = left + 10 + static_cast<int>(t) * (3 * bar + gap);
    for (int c = 0; c < 3; ++c) {
      if (std::isnan(g.profit[c])) continue;
      int hgt = static_cast<int>(std::lround(height * std::max(0.0, g.profit[c]) / top_value));
      s << "<rect x=\"" << x0 + c * bar << "\" y=\"" << top + height - hgt << "\" width=\"" << bar - 2
        << "\" height=\"" << hgt << "\" fill=\"" << colors[c] << "\"/>\n";
    }
    s << "<text x=\"" << x0 << "\" y=\"" << top + height + 16 << "\">n=" << g.size << "</text>\n";
    if (!g.fees.empty())
      s << "<text x=\"" << x0 << "\" y=\"" << top + height + 30 << "\">" << g.fees << "</text>\n";
  }
  for (int c = 0; c < 3; ++c) {
    int y = top + 10 + c * 18;
    s << "<rect x=\"" << width - 130 << "\" y=\"" << y - 10 << "\" width=\"12\" height=\"12\" fill=\""
      << colors[c] << "\"/><text x=\"" << width - 112 << "\" y=\"" << y << "\">" << names[c] << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace mcfod
