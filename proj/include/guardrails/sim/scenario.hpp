#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "guardrails/policy.hpp"

namespace guardrails::sim {

enum class ModelKind { fixed_wing, simplified, quadrotor };

std::string to_string(ModelKind m);
ModelKind model_kind_from_string(const std::string& s);

enum class PilotLaw {
  trim,
  hold,
  ramp,
  pitch_track,
  altitude_track,
  heading_track,
  bank_hold,
  bank_toward_fence,
  quad_velocity,
};

std::string to_string(PilotLaw law);
PilotLaw pilot_law_from_string(const std::string& s);

// Parameter names a law accepts (SI units, see config.cpp for file units).
const std::vector<std::string>& pilot_law_params(PilotLaw law);

struct PilotPhase {
  double start = 0.0;
  double end = 0.0;
  PilotLaw law = PilotLaw::trim;
  std::map<std::string, double> params;

  double get(const std::string& key, double fallback) const;
};

// A timestamped stick input, as recorded by a live session.
struct ReplayEvent {
  double t = 0.0;
  double uP_d = 0.0;
  double uz_d = 1.0;
};

struct StaleInputPolicy {
  double input_timeout = 0.5;
  double decay_time = 1.0;
};

struct PilotScript {
  std::string name = "pilot";
  std::vector<PilotPhase> phases;
  std::vector<ReplayEvent> replay;  // when non-empty the script replays these instead of phases
  StaleInputPolicy stale;
  double uP_noise = 0.0;  // rad/s, 1-sigma, seeded
  double uz_noise = 0.0;  // g

  void validate(double duration) const;
};

struct ScenarioConfig {
  std::string name;
  std::string description;
  ModelKind model = ModelKind::fixed_wing;

  FixedWingParams fw;
  QuadParams quad;

  FixedWingState fw_x0;
  SimplifiedState simple_x0;
  QuadState quad_x0;

  SafetySpec safety;
  FixedWingBackupConfig fw_backup;
  QuadBackupConfig quad_backup;
  BlendConfig blend;

  InputLimits<FixedWingInput> fw_limits{{-kPi / 2.0, -3.0}, {kPi / 2.0, 9.0}};
  InputLimits<SimplifiedInput> simple_limits{{-3.0}, {9.0}};
  InputLimits<QuadInput> quad_limits{{0.0, Eigen::Vector3d::Constant(-10.0)},
                                     {2.5 * kStandardGravity, Eigen::Vector3d::Constant(10.0)}};

  PilotScript pilot;
  double duration = 60.0;
  double sim_dt = 0.01;
  std::uint64_t seed = 1;

  void validate() const;
};

struct Overrides {
  double dt = 0.0;        // 0 keeps the scenario value
  double beta = 0.0;
  double duration = 0.0;
};

void apply_overrides(ScenarioConfig& cfg, const Overrides& o);

}  // namespace guardrails::sim
