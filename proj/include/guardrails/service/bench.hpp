#pragma once

#include <string>

#include "guardrails/sim/scenario.hpp"

namespace guardrails::service {

struct BenchResult {
  std::string scenario;
  int ticks = 0;
  double sim_dt = 0.0;
  double horizon = 0.0;
  double rollout_dt = 0.0;
  double p50_ms = 0.0;
  double p99_ms = 0.0;
  double max_ms = 0.0;
  double mean_ms = 0.0;
};

// Per-tick filter + integrate + telemetry serialization time.
BenchResult run_bench(const sim::ScenarioConfig& cfg, int ticks);
std::string render_bench(const BenchResult& r);

}  // namespace guardrails::service
