#include "guardrails/sim/scenario.hpp"

#include <algorithm>

namespace guardrails::sim {

std::string to_string(ModelKind m) {
  switch (m) {
    case ModelKind::fixed_wing: return "fixed_wing";
    case ModelKind::simplified: return "simplified";
    case ModelKind::quadrotor: return "quadrotor";
  }
  return "unknown";
}

ModelKind model_kind_from_string(const std::string& s) {
  for (auto m : {ModelKind::fixed_wing, ModelKind::simplified, ModelKind::quadrotor})
    if (to_string(m) == s) return m;
  throw ConfigError("unknown model '" + s + "'");
}

namespace {

const std::vector<std::pair<PilotLaw, std::string>>& law_names() {
  static const std::vector<std::pair<PilotLaw, std::string>> names = {
      {PilotLaw::trim, "trim"},
      {PilotLaw::hold, "hold"},
      {PilotLaw::ramp, "ramp"},
      {PilotLaw::pitch_track, "pitch_track"},
      {PilotLaw::altitude_track, "altitude_track"},
      {PilotLaw::heading_track, "heading_track"},
      {PilotLaw::bank_hold, "bank_hold"},
      {PilotLaw::bank_toward_fence, "bank_toward_fence"},
      {PilotLaw::quad_velocity, "quad_velocity"},
  };
  return names;
}

bool fixed_wing_only(PilotLaw law) {
  return law == PilotLaw::heading_track || law == PilotLaw::bank_hold || law == PilotLaw::bank_toward_fence;
}

}  // namespace

std::string to_string(PilotLaw law) {
  for (const auto& [l, n] : law_names())
    if (l == law) return n;
  return "unknown";
}

PilotLaw pilot_law_from_string(const std::string& s) {
  for (const auto& [l, n] : law_names())
    if (n == s) return l;
  throw ConfigError("unknown pilot law '" + s + "'");
}

const std::vector<std::string>& pilot_law_params(PilotLaw law) {
  static const std::map<PilotLaw, std::vector<std::string>> params = {
      {PilotLaw::trim, {}},
      {PilotLaw::hold, {"uP", "uz"}},
      {PilotLaw::ramp, {"uP", "uz", "uP_end", "uz_end"}},
      {PilotLaw::pitch_track, {"pitch", "bank", "K_pitch", "K_phi"}},
      {PilotLaw::altitude_track, {"altitude", "K_alt", "pitch_max", "bank", "K_pitch", "K_phi"}},
      {PilotLaw::heading_track, {"heading", "K_heading", "bank_max", "pitch", "altitude", "K_alt", "pitch_max", "K_pitch", "K_phi"}},
      {PilotLaw::bank_hold, {"bank", "pitch", "uz", "K_pitch", "K_phi"}},
      {PilotLaw::bank_toward_fence, {"bank_max", "K_heading", "pitch", "uz", "K_pitch", "K_phi"}},
      {PilotLaw::quad_velocity, {"vx", "vy", "vz"}},
  };
  return params.at(law);
}

double PilotPhase::get(const std::string& key, double fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

void PilotScript::validate(double duration) const {
  if (!(uP_noise >= 0.0) || !(uz_noise >= 0.0)) throw ConfigError("pilot noise must be non-negative");
  if (!(stale.input_timeout >= 0.0) || !(stale.decay_time > 0.0)) throw ConfigError("stale-input policy out of range");
  if (!replay.empty()) {
    for (std::size_t i = 1; i < replay.size(); ++i)
      if (replay[i].t < replay[i - 1].t) throw ConfigError("replay events must be time-ordered");
    return;
  }
  if (phases.empty()) throw ConfigError("pilot script '" + name + "' has no phases");
  if (phases.front().start != 0.0) throw ConfigError("pilot phases must start at t = 0");
  for (std::size_t i = 0; i < phases.size(); ++i) {
    const auto& ph = phases[i];
    if (!(ph.end > ph.start)) throw ConfigError("pilot phase " + std::to_string(i) + " is empty");
    if (i > 0 && ph.start != phases[i - 1].end)
      throw ConfigError("pilot phases must be contiguous (phase " + std::to_string(i) + ")");
    const auto& allowed = pilot_law_params(ph.law);
    for (const auto& [k, v] : ph.params) {
      if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
        throw ConfigError("pilot law " + to_string(ph.law) + " has no parameter '" + k + "'");
      if (!std::isfinite(v)) throw ConfigError("pilot parameter '" + k + "' is not finite");
    }
  }
  if (phases.back().end < duration) throw ConfigError("pilot phases must cover the run duration");
}

void ScenarioConfig::validate() const {
  if (name.empty()) throw ConfigError("scenario needs a name");
  if (!(duration > 0.0)) throw ConfigError("duration must be positive");
  if (!(sim_dt > 0.0)) throw ConfigError("sim_dt must be positive");
  rollout_steps(duration, sim_dt);
  safety.validate();
  blend.validate();
  pilot.validate(duration);
  if (model == ModelKind::quadrotor) {
    quad.validate();
    quad_backup.validate();
    for (const auto& c : safety.constraints)
      if (c.kind != ConstraintKind::box_axis) throw ConfigError("quadrotor scenarios only support box_axis constraints");
    for (const auto& ph : pilot.phases)
      if (ph.law != PilotLaw::trim && ph.law != PilotLaw::quad_velocity)
        throw ConfigError("pilot law " + to_string(ph.law) + " does not apply to the quadrotor");
    if (!pilot.replay.empty()) throw ConfigError("replay pilots are fixed-wing/simplified only");
    if (std::fabs(quad_x0.q.norm() - 1.0) > 1e-9) throw ConfigError("initial quaternion must be unit");
  } else {
    fw.validate();
    fw_backup.validate();
    for (const auto& c : safety.constraints) {
      if (c.kind == ConstraintKind::box_axis) throw ConfigError("box_axis constraints need the quadrotor model");
      if (model == ModelKind::simplified && c.kind == ConstraintKind::geofence)
        throw ConfigError("the simplified model has no horizontal position for a geofence");
    }
    for (const auto& ph : pilot.phases) {
      if (ph.law == PilotLaw::quad_velocity) throw ConfigError("quad_velocity needs the quadrotor model");
      if (model == ModelKind::simplified && fixed_wing_only(ph.law))
        throw ConfigError("pilot law " + to_string(ph.law) + " needs the fixed-wing model");
    }
    const double theta0 = model == ModelKind::simplified ? simple_x0.theta : fw_x0.theta;
    if (!(std::fabs(theta0) < kPi / 2.0)) throw ConfigError("initial pitch outside (-pi/2, pi/2)");
    if (model == ModelKind::fixed_wing && !(std::fabs(fw_x0.phi) < kPi / 2.0))
      throw ConfigError("initial roll outside (-pi/2, pi/2)");
  }
}

void apply_overrides(ScenarioConfig& cfg, const Overrides& o) {
  if (o.dt > 0.0) cfg.sim_dt = o.dt;
  if (o.beta > 0.0) cfg.blend.beta = o.beta;
  if (o.duration > 0.0) {
    cfg.duration = o.duration;
    if (!cfg.pilot.phases.empty() && cfg.pilot.phases.back().end < cfg.duration)
      cfg.pilot.phases.back().end = cfg.duration;
  }
  cfg.validate();
}

}  // namespace guardrails::sim
