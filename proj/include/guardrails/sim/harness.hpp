#pragma once

#include <memory>
#include <optional>
#include <string>

#include "guardrails/sim/trace.hpp"

namespace guardrails::sim {

struct ConstraintSummary {
  std::string name;
  std::string kind;
  bool in_min = true;
  double min_h = kInf;     // normalized
  double min_raw = kInf;   // SI (m, g, m^2)
  double tol_inv_raw = 0.0;
  bool pass = true;
};

struct SafetyReport {
  std::string scenario;
  ModelKind model = ModelKind::fixed_wing;
  double duration = 0.0;
  double sim_dt = 0.0;
  std::vector<ConstraintSummary> constraints;
  double max_lambda = 0.0;
  double intervention_occupancy = 0.0;  // fraction of ticks with lambda > 0.01
  int intervention_episodes = 0;
  double max_input_violation = 0.0;
  double min_h_I = kInf;
  double max_nz = -kInf;
  double min_nz = kInf;
  bool aborted = false;
  std::string abort_reason;
  bool pass = false;
};

struct ScenarioResult {
  SimTrace trace;
  SafetyReport report;
};

// Tick-by-tick scenario engine shared by run_scenario and live sessions.
// Tick k records the state at t = k * sim_dt, then advances (except the last).
class Runner {
public:
  explicit Runner(ScenarioConfig cfg);
  ~Runner();
  Runner(Runner&&) noexcept;
  Runner& operator=(Runner&&) noexcept;

  const ScenarioConfig& config() const;
  int tick_index() const;
  double time() const;  // time of the next tick
  bool finished() const;
  bool aborted() const;
  const std::string& abort_reason() const;

  // Runs one tick with the scripted pilot, or with u_d when given (fixed-wing
  // and simplified only; the simplified model reads u_z). Null once finished.
  const TraceRecord* tick(const std::optional<FixedWingInput>& u_d = std::nullopt);

  const SimTrace& trace() const;
  SimTrace take_trace();

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

ScenarioResult run_scenario(const ScenarioConfig& cfg);

// Derived deterministically from the trace.
SafetyReport summarize(const ScenarioConfig& cfg, const SimTrace& trace);

// 2 * L_h * V_max * dt in the constraint's raw units.
double tol_inv_raw(const ScenarioConfig& cfg, const ConstraintSpec& c, double v_max);

std::string render_summary(const SafetyReport& report);
// Writes summary.txt and per-panel CSV series into dir; returns written files.
std::vector<std::filesystem::path> render_report(const SafetyReport& report, const SimTrace& trace,
                                                 const ScenarioConfig& cfg, const std::filesystem::path& dir);

}  // namespace guardrails::sim
