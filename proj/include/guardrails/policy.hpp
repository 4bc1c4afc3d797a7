#pragma once

#include "guardrails/filter.hpp"

namespace guardrails {

struct FixedWingBackupConfig {
  TurnParams turn;
  double altitude_margin = 60.0;      // m, keeps H* off the limits
  double turn_tolerance = kPi / 2.0;  // rad of heading error still counted as "turned away"
  double turn_scale = 0.0;            // s/rad; 0 picks fence ttc_max / turn_tolerance
  double excursion_gain = 1.2;        // margin for the pitch-damping altitude excursion
  double horizon = 30.0;
  double rollout_dt = 0.02;

  void validate() const;
};

// Backup configuration resolved against a SafetySpec.
struct FixedWingPolicyShape {
  TurnParams turn;
  bool has_fence = false;
  ConstraintSpec fence;
  double psi_inward = 0.0;
  double hold_lo = -kInf;
  double hold_hi = kInf;
  double turn_tolerance = kPi / 2.0;
  double turn_scale = 1.0;
  double excursion_gain = 1.2;
  std::vector<ConstraintSpec> altitude;
  std::vector<ConstraintSpec> min_terms;
  double horizon = 30.0;
  double rollout_dt = 0.02;
};

FixedWingPolicyShape resolve_policy_shape(const SafetySpec& spec, const FixedWingBackupConfig& cfg);

namespace kernels {
inline namespace GUARDRAILS_ARCH_NS {

template <class R>
R hold_altitude(const R& H, const FixedWingPolicyShape& s) {
  return vclamp(H, s.hold_lo, s.hold_hi);
}

template <class R>
FixedWingInputT<R> fixed_wing_backup(const FixedWingStateT<R>& x, const R& dir, const FixedWingPolicyShape& s) {
  return turn_control(x, dir, R(s.psi_inward), hold_altitude(x.H, s), s.turn);
}

template <class R>
R simplified_backup_uz(const SimplifiedStateT<R>& x, const FixedWingPolicyShape& s) {
  return altitude_hold_uz(x.H, x.theta, R(1.0), hold_altitude(x.H, s), s.turn);
}

// Altitude margins less the excursion the pitch damping still has to absorb.
template <class R>
R altitude_backup_terms(const R& H, const R& theta, const FixedWingPolicyShape& s, const FixedWingParams& p) {
  R out(kInf);
  const double per_rad = s.excursion_gain * p.V_T / ((p.g / p.V_T) * s.turn.K_theta);
  for (const auto& c : s.altitude) {
    if (c.kind == ConstraintKind::alt_floor)
      out = vmin(out, (H - c.limit - per_rad * vmax(-theta, R(0.0))) / c.scale);
    else
      out = vmin(out, (c.limit - H - per_rad * vmax(theta, R(0.0))) / c.scale);
  }
  return out;
}

// progress = signed heading change past psi*, from turn_backup_set. The
// controller may switch turn branch mid-rollout at the window edge, which
// shifts the unwrapped progress by exactly 2 pi; reduce it back.
template <class R>
R turn_backup_term(const R& progress, const FixedWingPolicyShape& s) {
  return s.turn_scale * (s.turn_tolerance - vabs(wrap_pi(progress)));
}

// Remaining turn from psi to psi* in direction dir, in [-pi/2, 3pi/2).
template <class R>
R remaining_turn(const R& psi, const R& dir, const FixedWingPolicyShape& s) {
  return wrap_turn_window(dir * (R(s.psi_inward) - psi));
}

}  // namespace GUARDRAILS_ARCH_NS
}  // namespace kernels

constexpr double kEngageLambda = 0.01;
constexpr double kReleaseLambda = 1e-3;

// Caller-owned record of the current backup episode; latches the turn direction.
struct Episode {
  bool engaged = false;
  TurnDirection direction = TurnDirection::right;
  double engaged_at = 0.0;
  int count = 0;

  void update(double lambda, TurnDirection candidate, double t);
};

TurnDirection policy_direction(const FixedWingPolicyShape& s, const Episode& e, const FixedWingState& x);

BackupPolicy<FixedWingModel> make_fixed_wing_policy(const FixedWingPolicyShape& s, const FixedWingParams& p,
                                                    TurnDirection direction);
BackupPolicy<SimplifiedModel> make_simplified_policy(const FixedWingPolicyShape& s, const FixedWingParams& p);

struct QuadBackupConfig {
  QuadBackupParams params;
  double horizon = 3.0;
  double rollout_dt = 0.02;

  void validate() const;
};

BackupPolicy<QuadModel> make_quad_policy(const QuadBackupConfig& cfg, const QuadParams& p);

// Box constraints matching a quadrotor backup box.
SafetySpec quad_box_spec(const QuadBackupParams& qp);

}  // namespace guardrails
