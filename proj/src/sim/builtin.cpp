#include "guardrails/sim/builtin.hpp"

namespace guardrails::sim {

namespace {

PilotPhase phase(double start, double end, PilotLaw law, std::map<std::string, double> params = {}) {
  return PilotPhase{start, end, law, std::move(params)};
}

ConstraintSpec floor_ft(double ft, const FixedWingParams& p) {
  return make_alt_floor("alt_floor", ft_to_m(ft), p.V_T);
}

ConstraintSpec ceiling_ft(double ft, const FixedWingParams& p) {
  return make_alt_ceiling("alt_ceiling", ft_to_m(ft), p.V_T);
}

FixedWingState level(double H_m, double psi = 0.0) {
  FixedWingState x;
  x.H = H_m;
  x.psi = psi;
  return x;
}

ScenarioConfig g_limit_assault() {
  ScenarioConfig c;
  c.name = "g_limit_assault";
  c.description = "pilot pulls 7 g in a banked turn against 0.2..4 g load limits";
  c.model = ModelKind::fixed_wing;
  c.fw_x0 = level(6000.0);
  c.safety.constraints = {make_load_min("load_min", 0.2), make_load_max("load_max", 4.0)};
  c.duration = 30.0;
  c.pilot.name = "pull_hard";
  c.pilot.phases = {
      phase(0.0, 5.0, PilotLaw::trim),
      phase(5.0, 10.0, PilotLaw::bank_hold, {{"bank", deg_to_rad(70.0)}}),
      phase(10.0, 18.0, PilotLaw::bank_hold, {{"bank", deg_to_rad(70.0)}, {"uz", 7.0}}),
      phase(18.0, 20.0, PilotLaw::hold, {{"uP", 0.0}, {"uz", -1.0}}),
      phase(20.0, 30.0, PilotLaw::pitch_track, {{"pitch", 0.0}}),
  };
  return c;
}

ScenarioConfig ceiling_floor_assault() {
  ScenarioConfig c;
  c.name = "ceiling_floor_assault";
  c.description = "pilot pitches through the 22,700 ft ceiling, then down through the 18,700 ft floor";
  c.model = ModelKind::simplified;
  c.simple_x0 = SimplifiedState{ft_to_m(20900.0), 0.0, 1.0};
  c.safety.constraints = {floor_ft(18700.0, c.fw), ceiling_ft(22700.0, c.fw)};
  c.blend.beta = 8.0;
  c.duration = 300.0;
  c.pilot.name = "pitch_up_then_down";
  c.pilot.phases = {
      phase(0.0, 5.0, PilotLaw::trim),
      phase(5.0, 100.0, PilotLaw::pitch_track, {{"pitch", deg_to_rad(6.0)}}),
      phase(100.0, 230.0, PilotLaw::pitch_track, {{"pitch", deg_to_rad(-6.0)}}),
      phase(230.0, 250.0, PilotLaw::pitch_track, {{"pitch", deg_to_rad(4.0)}}),
      phase(250.0, 300.0, PilotLaw::altitude_track, {{"altitude", ft_to_m(21000.0)}}),
  };
  return c;
}

ScenarioConfig geofence_assault() {
  ScenarioConfig c;
  c.name = "geofence_assault";
  c.description = "perpendicular approach to a fence 6 km north, then sustained bank toward it";
  c.model = ModelKind::fixed_wing;
  c.fw_x0 = level(6000.0, 0.0);
  c.safety.constraints = {make_geofence_ttc("geofence", {6000.0, 0.0}, {-1.0, 0.0})};
  c.duration = 100.0;
  c.pilot.name = "bank_into_fence";
  c.pilot.phases = {
      phase(0.0, 35.0, PilotLaw::heading_track, {{"heading", 0.0}}),
      phase(35.0, 60.0, PilotLaw::bank_toward_fence, {{"bank_max", deg_to_rad(60.0)}}),
      phase(60.0, 100.0, PilotLaw::heading_track, {{"heading", deg_to_rad(90.0)}}),
  };
  return c;
}

ScenarioConfig geofence_assault_live() {
  ScenarioConfig c = geofence_assault();
  c.name = "geofence_assault_live";
  c.description = "geofence_assault setup flown from live stick input at 50 Hz";
  c.sim_dt = 0.02;
  c.duration = 600.0;
  c.pilot.name = "live";
  c.pilot.phases = {phase(0.0, c.duration, PilotLaw::trim)};
  return c;
}

ScenarioConfig geofence_floor_assault() {
  ScenarioConfig c;
  c.name = "geofence_floor_assault";
  c.description = "climb, then a ~5 deg dive timed to reach the floor and a fence together";
  c.model = ModelKind::fixed_wing;
  c.fw_x0 = level(ft_to_m(20500.0), 0.0);
  c.safety.constraints = {make_geofence_ttc("geofence", {16000.0, 0.0}, {-1.0, 0.0}), floor_ft(18700.0, c.fw)};
  c.duration = 160.0;
  c.pilot.name = "climb_then_dive";
  c.pilot.phases = {
      phase(0.0, 50.0, PilotLaw::heading_track, {{"heading", 0.0}}),
      phase(50.0, 75.0, PilotLaw::altitude_track, {{"altitude", ft_to_m(21900.0)}, {"pitch_max", deg_to_rad(5.0)}}),
      phase(75.0, 140.0, PilotLaw::heading_track, {{"heading", 0.0}, {"pitch", deg_to_rad(-5.0)}}),
      phase(140.0, 160.0, PilotLaw::bank_toward_fence, {{"bank_max", deg_to_rad(45.0)}, {"pitch", deg_to_rad(-5.0)}}),
  };
  return c;
}

ScenarioConfig geofence_floor_gload() {
  ScenarioConfig c;
  c.name = "geofence_floor_gload";
  c.description = "two assaults on a fence and the floor, the second with a 7 g pull at the floor";
  c.model = ModelKind::fixed_wing;
  c.fw_x0 = level(ft_to_m(22000.0), 0.0);
  c.safety.constraints = {
      make_geofence_ttc("geofence", {15000.0, 0.0}, {-1.0, 0.0}),
      floor_ft(18700.0, c.fw),
      make_load_min("load_min", 0.2),
      make_load_max("load_max", 4.0),
  };
  c.blend.beta = 3.0;
  c.duration = 320.0;
  c.pilot.name = "double_assault";
  c.pilot.phases = {
      phase(0.0, 100.0, PilotLaw::heading_track, {{"heading", 0.0}, {"pitch", deg_to_rad(-4.0)}}),
      phase(100.0, 140.0, PilotLaw::bank_toward_fence, {{"bank_max", deg_to_rad(75.0)}, {"pitch", deg_to_rad(-4.0)}}),
      phase(140.0, 180.0, PilotLaw::heading_track,
            {{"heading", kPi}, {"bank_max", deg_to_rad(60.0)}, {"altitude", ft_to_m(21000.0)}}),
      phase(180.0, 245.0, PilotLaw::bank_toward_fence, {{"bank_max", deg_to_rad(75.0)}, {"pitch", deg_to_rad(-5.0)}}),
      phase(245.0, 249.0, PilotLaw::bank_hold, {{"bank", 0.0}, {"uz", 7.0}}),
      phase(249.0, 320.0, PilotLaw::heading_track,
            {{"heading", kPi}, {"altitude", ft_to_m(21000.0)}, {"pitch_max", deg_to_rad(5.0)}}),
  };
  return c;
}

ScenarioConfig quad_geofence() {
  ScenarioConfig c;
  c.name = "quad_geofence";
  c.description = "quadrotor at 28 m/s toward a box face must stop without crossing it";
  c.model = ModelKind::quadrotor;
  auto& qp = c.quad_backup.params;
  qp.center = Eigen::Vector3d(0.0, 0.0, 10.0);
  qp.half_lengths = Eigen::Vector3d(40.0, 40.0, 10.0);
  c.safety = quad_box_spec(qp);
  c.quad_x0.p = Eigen::Vector3d(-30.0, 0.0, 10.0);
  c.quad_x0.v = Eigen::Vector3d(28.0, 0.0, 0.0);
  c.blend.beta = 20.0;
  c.duration = 10.0;
  c.pilot.name = "full_speed_ahead";
  c.pilot.phases = {
      phase(0.0, 4.0, PilotLaw::quad_velocity, {{"vx", 28.0}}),
      phase(4.0, 10.0, PilotLaw::quad_velocity),
  };
  return c;
}

ScenarioConfig null_pilot_cruise() {
  ScenarioConfig c;
  c.name = "null_pilot_cruise";
  c.description = "trim flight far from every limit; the filter should never act";
  c.model = ModelKind::fixed_wing;
  c.fw_x0 = level(ft_to_m(20700.0), kPi / 2.0);
  c.safety.constraints = {
      make_geofence_ttc("geofence", {20000.0, 0.0}, {-1.0, 0.0}),
      floor_ft(10000.0, c.fw),
      ceiling_ft(30000.0, c.fw),
      make_load_min("load_min", 0.2),
      make_load_max("load_max", 4.0),
  };
  c.duration = 60.0;
  c.pilot.name = "null";
  c.pilot.phases = {phase(0.0, 60.0, PilotLaw::trim)};
  return c;
}

}  // namespace

std::vector<ScenarioConfig> builtin_scenarios() {
  return {g_limit_assault(),        ceiling_floor_assault(), geofence_assault(), geofence_floor_assault(),
          geofence_floor_gload(),   quad_geofence(),         null_pilot_cruise(), geofence_assault_live()};
}

std::optional<ScenarioConfig> find_builtin(const std::string& name) {
  for (auto& c : builtin_scenarios())
    if (c.name == name) return c;
  return std::nullopt;
}

}  // namespace guardrails::sim
