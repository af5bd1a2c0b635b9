#include <cstdio>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "mcfod/exact.hpp"
#include "mcfod/experiment.hpp"
#include "mcfod/fees.hpp"
#include "mcfod/follower.hpp"
#include "mcfod/generator.hpp"
#include "mcfod/instance_io.hpp"
#include "mcfod/milp/mps.hpp"
#include "mcfod/milp/solve.hpp"

namespace {

using namespace mcfod;
using nlohmann::ordered_json;

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") std::cout << text;
  else write_text(path, text);
}

// A fee argument is either MAX, AVG or a fee file.
std::optional<FeeSchedule> resolve_fees(const Instance& inst, Variant v, const std::string& arg) {
  if (!is_fixed(v)) return std::nullopt;
  if (arg.empty()) throw ValidationError("--fees", to_string(v) + " needs --fees MAX|AVG|<file>");
  if (arg == "MAX" || arg == "max") return make_fixed_fees(inst, FeeKind::Max);
  if (arg == "AVG" || arg == "avg") return make_fixed_fees(inst, FeeKind::Avg);
  return load_fees(inst, arg);
}

struct BuildFlags {
  bool no_big_m = false;
  bool defer_cuts = false;
  bool prune_ip = false;
  bool no_strengthen = false;

  milp::BuildOptions options() const {
    milp::BuildOptions o;
    o.big_m = !no_big_m;
    o.defer_cuts = defer_cuts;
    o.prune_ip = prune_ip;
    o.ep_strengthen = !no_strengthen;
    return o;
  }
  void attach(CLI::App* app) {
    app->add_flag("--no-big-m", no_big_m, "EF/IF: disaggregated leg-cost rows instead of big-M");
    app->add_flag("--defer-cuts", defer_cuts, "EF/IF: leave leg-cost rows to the cut loop");
    app->add_flag("--prune-ip", prune_ip, "IP: drop non-profitable pi cells");
    app->add_flag("--no-strengthen", no_strengthen, "EP: skip the optimality cuts");
  }
};

int cmd_generate(const std::string& params_path, int n, int carriers, std::uint64_t seed, double tau,
                 double density, const std::string& raw_dir, const std::string& out,
                 const std::string& fee_kind, const std::string& fees_out, std::uint64_t fee_seed) {
  GenParams params;
  if (!params_path.empty()) params = params_from_json(nlohmann::json::parse(read_text(params_path)));
  if (carriers > 0) params.carriers = carriers;
  params.seed = seed;
  if (tau > 0) params.tau = tau;
  params.validate();
  Instance inst;
  if (!raw_dir.empty()) {
    RawData raw = load_raw_csv(raw_dir);
    inst = complete_hub_network(build_instance(raw, select_hubs(raw, params), params));
  } else {
    inst = generate(n, params, density);
  }
  emit(instance_to_text(inst), out);
  if (!fees_out.empty()) {
    FeeSchedule f = fee_kind == "RANDOM" || fee_kind == "random"
                        ? make_random_fees(inst, fee_seed)
                        : make_fixed_fees(inst, parse_fee_kind(fee_kind));
    save_fees(inst, f, fees_out);
  }
  return 0;
}

int cmd_preprocess(const std::string& in, const std::string& variant_s, const std::string& fees_arg,
                   const std::string& out, const std::string& report_path, bool csv) {
  Instance inst = load_instance(in);
  const Variant v = parse_variant(variant_s);
  PruneReport report;
  Instance work = inst.hub_network_complete() ? inst : complete_hub_network(inst);
  auto fees = resolve_fees(work, v, fees_arg);
  HubRemoval hr = remove_redundant_hubs(work);
  report.removed_hubs = hr.removed;
  if (fees && !hr.removed.empty()) fees = restrict_fees(work, hr, *fees);
  HubResolution res = resolve_hub_commodities(hr.instance);
  report.merge(res.report);
  auto costs = compute_costs(res.instance, v, fees ? &*fees : nullptr);
  PruneReport pr = prune_unprofitable(costs, res.instance);
  report.merge(pr);
  emit(instance_to_text(apply_prune(res.instance, pr)), out);
  std::string rep = csv ? report.to_csv() : report.to_json().dump(2) + "\n";
  if (!report_path.empty()) write_text(report_path, rep);
  else if (!out.empty() && out != "-") std::cout << rep;
  return 0;
}

int cmd_build(const std::string& in, const std::string& form_s, const std::string& variant_s,
              const std::string& fees_arg, const BuildFlags& flags, bool objsense_max, const std::string& out) {
  Instance inst = load_instance(in);
  const Variant v = parse_variant(variant_s);
  auto fees = resolve_fees(inst, v, fees_arg);
  auto model = milp::build(inst, parse_formulation(form_s), v, flags.options(), fees ? &*fees : nullptr);
  milp::MpsOptions mo;
  mo.objsense_max = objsense_max;
  emit(milp::emit_mps(model, mo), out);
  if (!out.empty() && out != "-")
    std::cerr << model.var_count() << " variables, " << model.row_count() << " rows, "
              << model.deferred_rows().size() << " deferred\n";
  return 0;
}

int cmd_solve(const std::string& in, const std::string& method, const std::string& form_s,
              const std::string& variant_s, const std::string& fees_arg, const BuildFlags& flags,
              double time_limit, const std::string& solver_cmd, bool keep_files, bool no_preprocess,
              int cap, const std::string& out) {
  Instance original = load_instance(in);
  const Variant v = parse_variant(variant_s);
  Instance base = original.hub_network_complete() ? original : complete_hub_network(original);
  auto fees = resolve_fees(base, v, fees_arg);
  HubRemoval hr{base, {}};
  if (!no_preprocess) hr = remove_redundant_hubs(base);
  std::optional<FeeSchedule> work_fees = fees;
  if (fees && !hr.removed.empty()) work_fees = restrict_fees(base, hr, *fees);
  Instance work = no_preprocess ? hr.instance : resolve_hub_commodities(hr.instance).instance;
  const FeeSchedule* fp = work_fees ? &*work_fees : nullptr;
  auto costs = compute_costs(work, v, fp);
  if (!no_preprocess) work = apply_prune(work, prune_unprofitable(costs, work));

  ordered_json summary;
  summary["instance"] = in;
  summary["variant"] = to_string(v);
  summary["method"] = method;
  std::optional<LeaderSolution> sol;
  if (method == "exact" || method == "bnb") {
    ExactOptions eo;
    eo.cap = cap;
    eo.fixed_fees = fp;
    BnbStats stats;
    sol = method == "exact" ? brute_force(work, costs, eo) : branch_and_bound(work, costs, eo, &stats);
    summary["status"] = "OPTIMAL";
    if (method == "bnb") summary["bnb"] = {{"nodes", stats.nodes}, {"pruned", stats.pruned}};
  } else if (method == "milp") {
    milp::MilpRunOptions mo;
    mo.formulation = parse_formulation(form_s);
    mo.variant = v;
    mo.build = flags.options();
    mo.solver_cmd = solver_cmd;
    mo.time_limit = time_limit;
    mo.keep_files = keep_files;
    auto run = milp::solve_milp(work, mo, fp, &costs);
    summary["formulation"] = to_string(mo.formulation);
    summary["status"] = run.error.empty() ? milp::to_string(run.outcome.status) : "ERROR";
    summary["variables"] = run.variables;
    summary["rows"] = run.rows;
    summary["cuts_added"] = run.outcome.cuts_added;
    summary["resolve_count"] = run.outcome.resolve_count;
    summary["build_seconds"] = run.build_seconds;
    summary["solve_seconds"] = run.solve_seconds;
    if (!run.outcome.workdir.empty()) summary["workdir"] = run.outcome.workdir.string();
    if (!run.error.empty()) summary["error"] = run.error;
    if (!run.outcome.message.empty()) summary["message"] = run.outcome.message;
    sol = run.solution;
  } else {
    throw ValidationError("--method", "expected exact, bnb or milp");
  }
  if (!sol) {
    std::cout << summary.dump(2) << "\n";
    return 1;
  }
  LeaderSolution lifted = hr.removed.empty() ? *sol : lift_solution(base, hr, *sol);
  auto report = verify_solution(base, lifted, v, fees ? &*fees : nullptr);
  if (!report.ok()) summary["status"] = "VERIFY_FAILED";
  summary["objective"] = lifted.objective;
  summary["served"] = lifted.served.size();
  summary["total"] = base.commodity_count();
  summary["service_rate"] = lifted.service_rate(base);
  summary["verification"] = report.to_json();
  if (!out.empty()) write_text(out, dump_lines(solution_to_json(base, lifted)));
  std::cout << summary.dump(2) << "\n";
  return report.ok() ? 0 : 1;
}

int cmd_verify(const std::string& in, const std::string& sol_path, const std::string& variant_s,
               const std::string& fees_arg) {
  Instance inst = load_instance(in);
  if (!inst.hub_network_complete()) inst = complete_hub_network(inst);
  const Variant v = parse_variant(variant_s);
  auto fees = resolve_fees(inst, v, fees_arg);
  LeaderSolution sol = solution_from_json(inst, nlohmann::json::parse(read_text(sol_path)));
  auto report = verify_solution(inst, sol, v, fees ? &*fees : nullptr);
  std::cout << report.to_json().dump(2) << "\n";
  return report.ok() ? 0 : 1;
}

int cmd_fees(const std::string& in, const std::string& kind, std::uint64_t seed, const std::string& sol_path,
             bool all, bool json_out, const std::string& out) {
  Instance inst = load_instance(in);
  FeeSchedule f;
  if (!sol_path.empty()) {
    f = solution_from_json(inst, nlohmann::json::parse(read_text(sol_path))).fees;
  } else if (kind == "RANDOM" || kind == "random") {
    f = make_random_fees(inst, seed);
  } else {
    f = make_fixed_fees(inst, parse_fee_kind(kind));
  }
  emit(json_out ? dump_lines(fees_to_json(inst, f)) : fees_to_csv(inst, f, all), out);
  return 0;
}

int cmd_experiment(const std::string& spec_path, const std::string& out, const std::string& report,
                   const std::string& plot, int workers, const std::string& solver_cmd) {
  ExperimentSpec spec = load_spec(spec_path);
  if (!out.empty()) spec.output = out;
  if (workers > 0) spec.workers = workers;
  if (!solver_cmd.empty()) spec.solver_cmd = solver_cmd;
  auto rows = run_experiment(spec);
  if (spec.output.empty()) std::cout << results_to_csv(rows);
  auto groups = report_service_profit(rows);
  if (!report.empty()) write_text(report, service_report_csv(groups));
  if (!plot.empty()) write_text(plot, service_report_svg(groups));
  int bad = 0;
  for (const auto& r : rows) bad += r.status != "OPTIMAL" && r.status != "FEASIBLE";
  std::cerr << rows.size() << " rows, " << bad << " not optimal\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-carrier outsourcing fee design toolkit"};
  app.require_subcommand(1);
  // Option defaults per subcommand, e.g. [solve] solver-cmd = "...".
  app.set_config("--config", "", "TOML file with option defaults");

  std::string in, out, variant = "FREE", fees_arg, form = "IP", report, solver_cmd;
  BuildFlags flags;

  auto* gen = app.add_subcommand("generate", "Generate a seeded instance");
  int n = 20, carriers = 0;
  std::uint64_t seed = 1, fee_seed = 1;
  double tau = 0, density = 1.0;
  std::string params_path, raw_dir, fee_kind = "MAX", fees_out;
  gen->add_option("-n,--nodes", n, "Node count")->check(CLI::Range(2, 100000));
  gen->add_option("-k,--carriers", carriers, "Carrier count");
  gen->add_option("--seed", seed, "Seed");
  gen->add_option("--tau", tau, "Hub fraction");
  gen->add_option("--density", density, "Probability an ordered pair carries demand")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--params", params_path, "Generator parameter JSON");
  gen->add_option("--raw", raw_dir, "Directory with nodes.csv, demand.csv [, unitcost.csv]");
  gen->add_option("-o,--output", out, "Instance JSON (stdout when omitted)");
  gen->add_option("--fees-out", fees_out, "Also write a fixed fee file");
  gen->add_option("--fee-kind", fee_kind, "MAX, AVG or RANDOM");
  gen->add_option("--fee-seed", fee_seed, "Seed for RANDOM fees");

  auto* pre = app.add_subcommand("preprocess", "Complete, reduce and prune an instance");
  bool csv = false;
  pre->add_option("instance", in)->required();
  pre->add_option("--variant", variant);
  pre->add_option("--fees", fees_arg, "MAX, AVG or a fee file");
  pre->add_option("-o,--output", out);
  pre->add_option("--report", report, "Prune report path");
  pre->add_flag("--csv", csv, "Report as CSV");

  auto* bld = app.add_subcommand("build", "Emit a formulation as MPS");
  bool objsense_max = false;
  bld->add_option("instance", in)->required();
  bld->add_option("--formulation", form, "EP, EF, IF or IP");
  bld->add_option("--variant", variant);
  bld->add_option("--fees", fees_arg, "MAX, AVG or a fee file");
  bld->add_option("-o,--output", out);
  bld->add_flag("--objsense-max", objsense_max, "Write OBJSENSE MAX instead of negating");
  flags.attach(bld);

  auto* slv = app.add_subcommand("solve", "Solve an instance");
  std::string method = "exact";
  double time_limit = 600;
  bool keep_files = false, no_preprocess = false;
  int cap = 12;
  slv->add_option("instance", in)->required();
  slv->add_option("--method", method, "exact, bnb or milp")->check(CLI::IsMember({"exact", "bnb", "milp"}));
  slv->add_option("--formulation", form, "EP, EF, IF or IP (milp)");
  slv->add_option("--variant", variant);
  slv->add_option("--fees", fees_arg, "MAX, AVG or a fee file");
  slv->add_option("--time-limit", time_limit, "Seconds");
  slv->add_option("--solver-cmd", solver_cmd, "Command template with {mps} {sol} {time}");
  slv->add_flag("--keep-files", keep_files, "Keep MPS, solution and log files");
  slv->add_flag("--no-preprocess", no_preprocess);
  slv->add_option("--cap", cap, "Brute-force non-hub cap");
  slv->add_option("-o,--output", out, "Solution JSON");
  flags.attach(slv);

  auto* ver = app.add_subcommand("verify", "Check a solution against the carriers' responses");
  std::string sol_path;
  ver->add_option("instance", in)->required();
  ver->add_option("solution", sol_path)->required();
  ver->add_option("--variant", variant);
  ver->add_option("--fees", fees_arg, "MAX, AVG or a fee file");

  auto* fee = app.add_subcommand("fees", "Print a fee schedule as CSV (r,leg,hub,fee)");
  std::string kind = "MAX";
  bool all = false, json_out = false;
  fee->add_option("instance", in)->required();
  fee->add_option("--kind", kind, "MAX, AVG or RANDOM");
  fee->add_option("--seed", seed, "Seed for RANDOM");
  fee->add_option("--solution", sol_path, "Take the fees of a solution file");
  fee->add_flag("--all", all, "Include zero entries");
  fee->add_flag("--json", json_out, "Fee file JSON instead of CSV");
  fee->add_option("-o,--output", out);

  auto* exp = app.add_subcommand("experiment", "Run an experiment matrix");
  std::string spec_path, plot;
  int workers = 0;
  exp->add_option("--spec", spec_path, "Experiment JSON")->required();
  exp->add_option("-o,--output", out, "Results CSV (overrides the spec)");
  exp->add_option("--report", report, "Service/profit summary CSV");
  exp->add_option("--plot", plot, "Profit bar chart (SVG)");
  exp->add_option("--workers", workers);
  exp->add_option("--solver-cmd", solver_cmd);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*gen) return cmd_generate(params_path, n, carriers, seed, tau, density, raw_dir, out, fee_kind, fees_out, fee_seed);
    if (*pre) return cmd_preprocess(in, variant, fees_arg, out, report, csv);
    if (*bld) return cmd_build(in, form, variant, fees_arg, flags, objsense_max, out);
    if (*slv)
      return cmd_solve(in, method, form, variant, fees_arg, flags, time_limit, solver_cmd, keep_files,
                       no_preprocess, cap, out);
    if (*ver) return cmd_verify(in, sol_path, variant, fees_arg);
    if (*fee) return cmd_fees(in, kind, seed, sol_path, all, json_out, out);
    if (*exp) return cmd_experiment(spec_path, out, report, plot, workers, solver_cmd);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
