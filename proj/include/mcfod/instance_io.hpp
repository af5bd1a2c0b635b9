#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "mcfod/instance.hpp"
#include "mcfod/solution.hpp"

namespace mcfod {

using ordered_json = nlohmann::ordered_json;

Instance instance_from_json(const nlohmann::json& j);
ordered_json instance_to_json(const Instance& inst);
Instance load_instance(const std::filesystem::path& path);
void save_instance(const Instance& inst, const std::filesystem::path& path);
// Canonical text: spec key order, one array element per line.
std::string instance_to_text(const Instance& inst);

// Fee files: {"p": [{"r","i","fee"}...], "q": [...]}. Missing entries are 0.
FeeSchedule fees_from_json(const Instance& inst, const nlohmann::json& j);
ordered_json fees_to_json(const Instance& inst, const FeeSchedule& fees);
FeeSchedule load_fees(const Instance& inst, const std::filesystem::path& path);
void save_fees(const Instance& inst, const FeeSchedule& fees, const std::filesystem::path& path);
// CSV columns r,leg,hub,fee; nonzero entries only unless all=true.
std::string fees_to_csv(const Instance& inst, const FeeSchedule& fees, bool all = false);

ordered_json solution_to_json(const Instance& inst, const LeaderSolution& sol);
LeaderSolution solution_from_json(const Instance& inst, const nlohmann::json& j);

// Shared helpers.
std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);
// Top-level object with one array element per line.
std::string dump_lines(const ordered_json& j);

}  // namespace mcfod
