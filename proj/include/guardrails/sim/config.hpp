#pragma once

#include <filesystem>
#include <string>

#include "guardrails/sim/scenario.hpp"

namespace guardrails::sim {

// Scenario documents: sections model, safety, backup, blend, pilot, run.
// Unknown keys are errors; physical fields carry unit suffixes (_ft, _m, _deg, _rad).
ScenarioConfig parse_scenario(const std::string& text);
ScenarioConfig load_scenario_file(const std::filesystem::path& path);
std::string dump_scenario(const ScenarioConfig& cfg);

// Built-in name or a file path.
ScenarioConfig resolve_scenario(const std::string& name_or_path);

}  // namespace guardrails::sim
