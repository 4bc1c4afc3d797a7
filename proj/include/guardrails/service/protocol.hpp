#pragma once

#include <string>
#include <vector>

#include "guardrails/service/session.hpp"

namespace guardrails::service {

struct Reply {
  std::vector<std::string> frames;
  bool close = false;  // protocol violation: send frames, then close this session only
};

// Client -> server: start {scenario, every?}, input {uP_d, uz_d}, pause, resume, reset, list.
Reply handle_message(Session& session, const std::string& text, int& telemetry_every);

std::string telemetry_frame(sim::ModelKind model, const std::vector<std::string>& constraint_names,
                            const sim::TraceRecord& rec, std::uint64_t dropped = 0);
std::string telemetry_frame(const Session& session, const sim::TraceRecord& rec, std::uint64_t dropped = 0);
std::string scenario_list_frame(const std::string& default_scenario);
std::string error_frame(const std::string& code, const std::string& detail);

}  // namespace guardrails::service
