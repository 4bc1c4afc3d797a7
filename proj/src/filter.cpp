#include "guardrails/policy.hpp"

#include <memory>

namespace guardrails {

void BlendConfig::validate() const {
  if (!(beta > 0.0)) throw ConfigError("blend beta must be positive");
}

double blend_lambda(double h, const BlendConfig& cfg) { return std::exp(-cfg.beta * std::max(0.0, h)); }

namespace {

void clamp_uz(double& u_z, const SafetySpec& spec) {
  for (const auto& c : spec.constraints) {
    if (c.kind == ConstraintKind::load_min) u_z = std::max(u_z, c.limit);
    if (c.kind == ConstraintKind::load_max) u_z = std::min(u_z, c.limit);
  }
}

}  // namespace

void apply_load_limits(FixedWingInput& u, const SafetySpec& spec) { clamp_uz(u.u_z, spec); }
void apply_load_limits(SimplifiedInput& u, const SafetySpec& spec) { clamp_uz(u.u_z, spec); }

void FixedWingBackupConfig::validate() const {
  turn.validate();
  if (!(altitude_margin >= 0.0)) throw ConfigError("altitude_margin must be non-negative");
  if (!(turn_tolerance > 0.0 && turn_tolerance <= kPi)) throw ConfigError("turn_tolerance must lie in (0, pi]");
  if (!(turn_scale >= 0.0)) throw ConfigError("turn_scale must be non-negative");
  if (!(excursion_gain >= 0.0)) throw ConfigError("excursion_gain must be non-negative");
  if (!(horizon > 0.0) || !(rollout_dt > 0.0) || rollout_dt > horizon)
    throw ConfigError("backup horizon/rollout_dt out of range");
  rollout_steps(horizon, rollout_dt);
}

void QuadBackupConfig::validate() const {
  params.validate();
  if (!(horizon > 0.0) || !(rollout_dt > 0.0) || rollout_dt > horizon)
    throw ConfigError("backup horizon/rollout_dt out of range");
  rollout_steps(horizon, rollout_dt);
}

template <class Model>
void BackupPolicy<Model>::validate() const {
  if (!controller || !backup_set) throw ConfigError("backup policy is incomplete");
  if (!(horizon > 0.0) || !(rollout_dt > 0.0) || rollout_dt > horizon)
    throw ConfigError("backup horizon/rollout_dt out of range");
}

template struct BackupPolicy<FixedWingModel>;
template struct BackupPolicy<SimplifiedModel>;
template struct BackupPolicy<QuadModel>;

FixedWingPolicyShape resolve_policy_shape(const SafetySpec& spec, const FixedWingBackupConfig& cfg) {
  FixedWingPolicyShape s;
  s.turn = cfg.turn;
  s.turn_tolerance = cfg.turn_tolerance;
  s.excursion_gain = cfg.excursion_gain;
  s.horizon = cfg.horizon;
  s.rollout_dt = cfg.rollout_dt;
  if (const ConstraintSpec* fence = spec.find(ConstraintKind::geofence)) {
    s.has_fence = true;
    s.fence = *fence;
    s.psi_inward = inward_heading(*fence);
  } else {
    s.turn.wings_level = true;
  }
  s.turn_scale = cfg.turn_scale > 0.0 ? cfg.turn_scale : (s.has_fence ? s.fence.ttc_max : 1.0) / s.turn_tolerance;

  double floor = -kInf, ceiling = kInf;
  for (const auto& c : spec.constraints) {
    if (c.kind == ConstraintKind::alt_floor) floor = std::max(floor, c.limit);
    if (c.kind == ConstraintKind::alt_ceiling) ceiling = std::min(ceiling, c.limit);
    if (c.kind == ConstraintKind::alt_floor || c.kind == ConstraintKind::alt_ceiling) s.altitude.push_back(c);
    if (c.in_min()) s.min_terms.push_back(c);
  }
  s.hold_lo = floor + cfg.altitude_margin;
  s.hold_hi = ceiling - cfg.altitude_margin;
  if (s.hold_lo > s.hold_hi) s.hold_lo = s.hold_hi = 0.5 * (floor + ceiling);
  return s;
}

void Episode::update(double lambda, TurnDirection candidate, double t) {
  if (!engaged && lambda >= kEngageLambda) {
    engaged = true;
    direction = candidate;
    engaged_at = t;
    ++count;
  } else if (engaged && lambda < kReleaseLambda) {
    engaged = false;
  }
}

TurnDirection policy_direction(const FixedWingPolicyShape& s, const Episode& e, const FixedWingState& x) {
  if (!s.has_fence) return TurnDirection::right;
  if (e.engaged) return e.direction;
  return choose_turn_direction(x, s.fence);
}

BackupPolicy<FixedWingModel> make_fixed_wing_policy(const FixedWingPolicyShape& s, const FixedWingParams& p,
                                                    TurnDirection direction) {
  const double dir = direction == TurnDirection::right ? 1.0 : -1.0;
  BackupPolicy<FixedWingModel> policy;
  policy.horizon = s.horizon;
  policy.rollout_dt = s.rollout_dt;
  auto sp = std::make_shared<const FixedWingPolicyShape>(s);
  policy.controller = [sp, dir](const FixedWingState& x) {
    if (!(std::fabs(x.phi) < kPi / 2.0)) throw UprightViolation("backup controller: |phi| >= pi/2");
    return kernels::fixed_wing_backup(x, dir, *sp);
  };
  policy.backup_set = [sp, p, dir](const RolloutSummary<FixedWingState>& r) {
    double hb = std::min(kernels::combined_h(sp->min_terms, r.terminal, p),
                         kernels::altitude_backup_terms(r.terminal.H, r.terminal.theta, *sp, p));
    if (sp->has_fence) {
      const double progress = dir * r.heading_change - kernels::remaining_turn(r.initial.psi, dir, *sp);
      hb = std::min(hb, kernels::turn_backup_term(progress, *sp));
    }
    return hb;
  };
  return policy;
}

BackupPolicy<SimplifiedModel> make_simplified_policy(const FixedWingPolicyShape& s, const FixedWingParams& p) {
  BackupPolicy<SimplifiedModel> policy;
  policy.horizon = s.horizon;
  policy.rollout_dt = s.rollout_dt;
  auto sp = std::make_shared<const FixedWingPolicyShape>(s);
  policy.controller = [sp](const SimplifiedState& x) {
    return SimplifiedInput{kernels::simplified_backup_uz(x, *sp)};
  };
  policy.backup_set = [sp, p](const RolloutSummary<SimplifiedState>& r) {
    return std::min(kernels::combined_h(sp->min_terms, r.terminal, p),
                    kernels::altitude_backup_terms(r.terminal.H, r.terminal.theta, *sp, p));
  };
  return policy;
}

BackupPolicy<QuadModel> make_quad_policy(const QuadBackupConfig& cfg, const QuadParams& p) {
  BackupPolicy<QuadModel> policy;
  policy.horizon = cfg.horizon;
  policy.rollout_dt = cfg.rollout_dt;
  const QuadBackupParams qp = cfg.params;
  policy.controller = [qp, p](const QuadState& x) { return quad_backup_controller(x, qp, p); };
  policy.backup_set = [qp](const RolloutSummary<QuadState>& r) { return quad_backup_set(r.terminal, qp); };
  return policy;
}

SafetySpec quad_box_spec(const QuadBackupParams& qp) {
  SafetySpec spec;
  const char* names[3] = {"box_x", "box_y", "box_z"};
  // scale 2r: near a face r^2 - d^2 ~ 2r * (distance to the face), so h reads in meters there
  for (int i = 0; i < 3; ++i)
    spec.constraints.push_back(
        make_box_axis(names[i], i, qp.center(i), qp.half_lengths(i), 2.0 * qp.half_lengths(i)));
  return spec;
}

}  // namespace guardrails
