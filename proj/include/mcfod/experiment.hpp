#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mcfod/generator.hpp"
#include "mcfod/milp/formulations.hpp"

namespace mcfod {

// Where the fixed fees of a FIXED_* run come from. File means the fee file
// listed next to the instance.
enum class FeeSource { None, Max, Avg, File };

struct VariantSpec {
  Variant variant = Variant::Free;
  FeeSource fees = FeeSource::None;

  // "FREE", "FIXED_OPTIMISTIC:MAX", ...
  std::string label() const;
  static VariantSpec parse(const std::string& s);
};

enum class Method { Exact, Bnb, EP, EF, IF, IP };
std::string to_string(Method m);
Method parse_method(const std::string& s);

struct InstanceSource {
  std::filesystem::path path;
  std::filesystem::path fees;  // optional, used by FeeSource::File
};

struct GenerationMatrix {
  std::vector<int> sizes;
  std::vector<int> carriers;
  std::vector<std::uint64_t> seeds;
  GenParams params;
  double density = 1.0;
};

struct ExperimentSpec {
  std::vector<InstanceSource> instances;
  std::optional<GenerationMatrix> generate;
  std::vector<VariantSpec> variants;
  std::vector<Method> methods;
  milp::BuildOptions build;
  double time_limit = 600;
  std::string solver_cmd;       // empty: environment / bundled runner
  int workers = 0;              // 0: half the CPUs, at least one
  bool preprocess = true;
  int exact_cap = 12;
  std::filesystem::path output;  // CSV, optional

  void validate() const;
};

// Relative paths resolve against base_dir.
ExperimentSpec spec_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = ".");
ExperimentSpec load_spec(const std::filesystem::path& path);

struct ResultRow {
  std::string instance;
  int nodes = 0;
  int carriers = 0;
  int hubs = 0;
  std::string variant;  // VariantSpec::label()
  std::string method;
  double preprocess_seconds = 0;
  double load_seconds = 0;
  double solve_seconds = 0;
  std::optional<double> objective;
  std::string status;
  int served = 0;
  int total = 0;
  double service_rate = 0;
  int cuts = 0;
  std::string note;
};

// One row per (instance, variant, method) in matrix order. Failures land in
// status and note; the batch always completes.
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec);

std::string results_csv_header();
std::string results_to_csv(const std::vector<ResultRow>& rows);

struct ServiceGroup {
  int size = 0;           // |V|
  std::string fees;       // fee source of the fixed columns
  int instances = 0;
  // Indexed MCFOD_F, rMCFOD_F, MCFOD; NaN when a column has no rows.
  double rate[3] = {0, 0, 0};
  double profit[3] = {0, 0, 0};
  // MCFOD >= rMCFOD_F >= MCFOD_F on both measures; empty columns are skipped.
  bool ordered() const;
  bool complete() const;
};

// Per |V| and fee source, averages over instances of the best verified row
// per (instance, variant).
std::vector<ServiceGroup> report_service_profit(const std::vector<ResultRow>& rows);
std::string service_report_csv(const std::vector<ServiceGroup>& groups);
std::string service_report_svg(const std::vector<ServiceGroup>& groups);

}  // namespace mcfod
