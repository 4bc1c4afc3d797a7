#pragma once

#include <optional>

#include "guardrails/sim/scenario.hpp"

namespace guardrails::sim {

std::vector<ScenarioConfig> builtin_scenarios();
std::optional<ScenarioConfig> find_builtin(const std::string& name);

}  // namespace guardrails::sim
