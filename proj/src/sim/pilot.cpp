#include "guardrails/sim/pilot.hpp"

#include <algorithm>

namespace guardrails::sim {

FixedWingInput decayed_input(const ReplayEvent& latest, double t, const StaleInputPolicy& stale) {
  const double age = t - latest.t;
  const double w = std::clamp((age - stale.input_timeout) / stale.decay_time, 0.0, 1.0);
  // trim is (0, 1)
  return {(1.0 - w) * latest.uP_d, (1.0 - w) * latest.uz_d + w * 1.0};
}

Pilot::Pilot(const ScenarioConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {}

const PilotPhase* Pilot::phase_at(double t) {
  const auto& ph = cfg_.pilot.phases;
  if (ph.empty()) return nullptr;
  while (cursor_ + 1 < ph.size() && t >= ph[cursor_].end) ++cursor_;
  while (cursor_ > 0 && t < ph[cursor_].start) --cursor_;
  return &ph[cursor_];
}

FixedWingInput Pilot::replay_at(double t) const {
  const auto& ev = cfg_.pilot.replay;
  auto it = std::upper_bound(ev.begin(), ev.end(), t, [](double tt, const ReplayEvent& e) { return tt < e.t; });
  if (it == ev.begin()) return {0.0, 1.0};
  return decayed_input(*std::prev(it), t, cfg_.pilot.stale);
}

double Pilot::noise(double sigma) { return sigma > 0.0 ? sigma * normal_(rng_) : 0.0; }

namespace {

double pitch_law_uz(const PilotPhase& ph, double theta, double phi) {
  if (ph.params.count("uz")) return ph.params.at("uz");
  const double theta_t = ph.get("pitch", 0.0);
  return std::cos(theta) / std::cos(phi) + ph.get("K_pitch", 8.0) * (theta_t - theta);
}

double altitude_pitch_target(const PilotPhase& ph, double H) {
  const double lim = ph.get("pitch_max", deg_to_rad(10.0));
  return std::clamp(ph.get("K_alt", 0.002) * (ph.get("altitude", H) - H), -lim, lim);
}

}  // namespace

FixedWingInput Pilot::command(const FixedWingState& x, double t) {
  FixedWingInput u{0.0, 1.0};
  if (!cfg_.pilot.replay.empty()) return replay_at(t);
  const PilotPhase& ph = *phase_at(t);
  const double tau = (t - ph.start) / (ph.end - ph.start);
  const double K_phi = ph.get("K_phi", 3.0);
  double bank = ph.get("bank", 0.0);
  switch (ph.law) {
    case PilotLaw::trim: break;
    case PilotLaw::hold: u = {ph.get("uP", 0.0), ph.get("uz", 1.0)}; break;
    case PilotLaw::ramp: {
      const double uP0 = ph.get("uP", 0.0), uz0 = ph.get("uz", 1.0);
      u = {uP0 + tau * (ph.get("uP_end", uP0) - uP0), uz0 + tau * (ph.get("uz_end", uz0) - uz0)};
      break;
    }
    case PilotLaw::pitch_track:
    case PilotLaw::bank_hold:
      u = {K_phi * (bank - x.phi), pitch_law_uz(ph, x.theta, x.phi)};
      break;
    case PilotLaw::altitude_track: {
      PilotPhase tmp = ph;
      tmp.params["pitch"] = altitude_pitch_target(ph, x.H);
      u = {K_phi * (bank - x.phi), pitch_law_uz(tmp, x.theta, x.phi)};
      break;
    }
    case PilotLaw::heading_track:
    case PilotLaw::bank_toward_fence: {
      double target = ph.get("heading", x.psi);
      if (ph.law == PilotLaw::bank_toward_fence) {
        const ConstraintSpec* fence = cfg_.safety.find(ConstraintKind::geofence);
        target = fence ? inward_heading(*fence) + kPi : x.psi;
      }
      const double lim = ph.get("bank_max", deg_to_rad(60.0));
      bank = std::clamp(ph.get("K_heading", 2.0) * kernels::wrap_pi(target - x.psi), -lim, lim);
      // an altitude parameter replaces the fixed pitch target
      PilotPhase tmp = ph;
      if (ph.params.count("altitude")) tmp.params["pitch"] = altitude_pitch_target(ph, x.H);
      u = {K_phi * (bank - x.phi), pitch_law_uz(tmp, x.theta, x.phi)};
      break;
    }
    case PilotLaw::quad_velocity: break;
  }
  u.u_P += noise(cfg_.pilot.uP_noise);
  u.u_z += noise(cfg_.pilot.uz_noise);
  return u;
}

SimplifiedInput Pilot::command(const SimplifiedState& x, double t) {
  if (!cfg_.pilot.replay.empty()) return {replay_at(t).u_z};
  const PilotPhase& ph = *phase_at(t);
  const double tau = (t - ph.start) / (ph.end - ph.start);
  double uz = 1.0;
  switch (ph.law) {
    case PilotLaw::hold: uz = ph.get("uz", 1.0); break;
    case PilotLaw::ramp: {
      const double uz0 = ph.get("uz", 1.0);
      uz = uz0 + tau * (ph.get("uz_end", uz0) - uz0);
      break;
    }
    case PilotLaw::pitch_track: uz = pitch_law_uz(ph, x.theta, 0.0); break;
    case PilotLaw::altitude_track: {
      PilotPhase tmp = ph;
      tmp.params["pitch"] = altitude_pitch_target(ph, x.H);
      uz = pitch_law_uz(tmp, x.theta, 0.0);
      break;
    }
    default: break;
  }
  return {uz + noise(cfg_.pilot.uz_noise)};
}

QuadInput Pilot::command(const QuadState& x, double t) {
  const PilotPhase& ph = *phase_at(t);
  if (ph.law == PilotLaw::quad_velocity) {
    const Eigen::Vector3d v_ref(ph.get("vx", 0.0), ph.get("vy", 0.0), ph.get("vz", 0.0));
    return quad_velocity_tracking(x, v_ref, cfg_.quad_backup.params, cfg_.quad);
  }
  return quad_velocity_tracking(x, Eigen::Vector3d::Zero(), cfg_.quad_backup.params, cfg_.quad);
}

}  // namespace guardrails::sim
