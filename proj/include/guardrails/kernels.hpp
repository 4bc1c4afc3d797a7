#pragma once

// Model, controller and constraint math written once over a scalar type R.
// The public scalar API instantiates R = double; src/batch instantiates SIMD.

#include <vector>

#include "guardrails/simd_ops.hpp"
#include "guardrails/state.hpp"

namespace guardrails {

enum class TurnDirection { left, right };

struct Saturation {
  double lo;
  double hi;
};

struct TurnParams {
  double phi_star = 60.0 * kPi / 180.0;
  double H_star = 0.0;
  double psi_star = 0.0;
  TurnDirection direction = TurnDirection::right;
  double K_phi = 3.0;
  double K_psi = 2.0;
  double K_H = 0.002;
  double K_theta = 2.0;
  Saturation sat_P{-kPi / 2.0, kPi / 2.0};
  Saturation sat_z{0.2, 4.0};
  bool wings_level = false;  // altitude hold only, phi_bar = 0

  void validate() const;
};

enum class ConstraintKind { load_min, load_max, alt_floor, alt_ceiling, geofence, box_axis };
enum class GeofenceMeasure { distance, ttc };

struct ConstraintSpec {
  std::string name;
  ConstraintKind kind = ConstraintKind::alt_floor;
  double limit = 0.0;  // N_z limit (g) or altitude limit (m)
  Eigen::Vector2d point = Eigen::Vector2d::Zero();  // geofence p_g (N, E)
  Eigen::Vector2d normal = Eigen::Vector2d(1.0, 0.0);  // n_g, points into the safe side
  GeofenceMeasure measure = GeofenceMeasure::distance;
  double eps_v = 1.0;
  double ttc_max = 120.0;
  int axis = 0;  // box_axis
  double center = 0.0;
  double half_length = 1.0;
  double scale = 1.0;

  void validate() const;
  bool in_min() const { return kind != ConstraintKind::load_min && kind != ConstraintKind::load_max; }
};

namespace kernels {
inline namespace GUARDRAILS_ARCH_NS {

template <class R>
FixedWingStateT<R> fixed_wing_deriv(const FixedWingStateT<R>& x, const FixedWingInputT<R>& u,
                                    const FixedWingParams& p) {
  const R sphi = vsin(x.phi);
  const R cphi = vcos(x.phi);
  const R sth = vsin(x.theta);
  const R cth = vcos(x.theta);
  const R tth = sth / cth;
  const double gV = p.g / p.V_T;
  FixedWingStateT<R> d;
  d.phi = x.P + x.N_z * gV * sphi * tth;
  d.theta = gV * (x.N_z * cphi - cth);
  d.psi = x.N_z * p.g * sphi / (p.V_T * cth);
  d.p_n = p.V_T * cth * vcos(x.psi);
  d.p_e = p.V_T * cth * vsin(x.psi);
  d.H = p.V_T * sth;
  d.P = (u.u_P - x.P) / p.tau_P;
  d.N_z = (u.u_z - x.N_z) / p.tau_z;
  return d;
}

template <class R>
SimplifiedStateT<R> simplified_deriv(const SimplifiedStateT<R>& x, const R& u_z, const FixedWingParams& p) {
  const double gV = p.g / p.V_T;
  SimplifiedStateT<R> d;
  d.H = p.V_T * vsin(x.theta);
  d.theta = gV * (x.N_z - vcos(x.theta));
  d.N_z = (u_z - x.N_z) / p.tau_z;
  return d;
}

// RK4 on any record exposing fields(); f maps state -> derivative.
template <class S, class F>
S rk4(F&& f, const S& x, double dt) {
  const double h2 = 0.5 * dt;
  const double h6 = dt / 6.0;
  auto axpy = [](double c) {
    return [c](const auto& a, const auto& b) { return a + c * b; };
  };
  const S k1 = f(x);
  const S k2 = f(zip_fields(axpy(h2), x, k1));
  const S k3 = f(zip_fields(axpy(h2), x, k2));
  const S k4 = f(zip_fields(axpy(dt), x, k3));
  return zip_fields(
      [h6](const auto& a, const auto& b1, const auto& b2, const auto& b3, const auto& b4) {
        return a + h6 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
      },
      x, k1, k2, k3, k4);
}

template <class R>
R altitude_hold_uz(const R& H, const R& theta, const R& cphi, const R& H_star, const TurnParams& tp) {
  return vclamp((1.0 + tp.K_H * (H_star - H) - tp.K_theta * theta) / cphi, tp.sat_z.lo, tp.sat_z.hi);
}

// dir = +1 right, -1 left. psi_star is the target heading.
template <class R>
FixedWingInputT<R> turn_control(const FixedWingStateT<R>& x, const R& dir, const R& psi_star, const R& H_star,
                                const TurnParams& tp) {
  R phi_bar(0.0);
  if (!tp.wings_level) {
    const R e = wrap_turn_window(dir * (psi_star - x.psi));
    phi_bar = dir * vclamp(tp.K_psi * e, -tp.phi_star, tp.phi_star);
  }
  FixedWingInputT<R> u;
  u.u_P = vclamp(tp.K_phi * (phi_bar - x.phi), tp.sat_P.lo, tp.sat_P.hi);
  u.u_z = altitude_hold_uz(x.H, x.theta, vcos(x.phi), H_star, tp);
  return u;
}

// +1 when a right turn reaches the inward-normal heading sooner; ties go right.
template <class R>
R turn_direction_sign(const R& psi, double psi_inward) {
  const R d = wrap_pi(psi_inward - psi);
  return select(d >= 0.0, R(1.0), R(-1.0));
}

template <class R>
R geofence_raw(const ConstraintSpec& c, const R& p_n, const R& p_e) {
  return c.normal.x() * (p_n - c.point.x()) + c.normal.y() * (p_e - c.point.y());
}

template <class R>
R geofence_ttc(const ConstraintSpec& c, const FixedWingStateT<R>& x, const FixedWingParams& p) {
  const R raw = geofence_raw(c, x.p_n, x.p_e);
  const R vh = p.V_T * vcos(x.theta);
  const R closing = -(c.normal.x() * vh * vcos(x.psi) + c.normal.y() * vh * vsin(x.psi));
  return vmin(raw / vmax(closing, R(c.eps_v)), R(c.ttc_max));
}

template <class R>
R constraint_value(const ConstraintSpec& c, const FixedWingStateT<R>& x, const FixedWingParams& p) {
  switch (c.kind) {
    case ConstraintKind::load_min: return (x.N_z - c.limit) / c.scale;
    case ConstraintKind::load_max: return (c.limit - x.N_z) / c.scale;
    case ConstraintKind::alt_floor: return (x.H - c.limit) / c.scale;
    case ConstraintKind::alt_ceiling: return (c.limit - x.H) / c.scale;
    case ConstraintKind::geofence:
      if (c.measure == GeofenceMeasure::ttc) return geofence_ttc(c, x, p);
      return geofence_raw(c, x.p_n, x.p_e) / c.scale;
    case ConstraintKind::box_axis: break;
  }
  throw MissingFieldError("constraint '" + c.name + "' needs a quadrotor position");
}

template <class R>
R constraint_value(const ConstraintSpec& c, const SimplifiedStateT<R>& x, const FixedWingParams&) {
  switch (c.kind) {
    case ConstraintKind::load_min: return (x.N_z - c.limit) / c.scale;
    case ConstraintKind::load_max: return (c.limit - x.N_z) / c.scale;
    case ConstraintKind::alt_floor: return (x.H - c.limit) / c.scale;
    case ConstraintKind::alt_ceiling: return (c.limit - x.H) / c.scale;
    case ConstraintKind::geofence: throw MissingFieldError("constraint '" + c.name + "' needs horizontal position");
    case ConstraintKind::box_axis: break;
  }
  throw MissingFieldError("constraint '" + c.name + "' needs a quadrotor position");
}

// Min over the constraints that take part in h (load limits are input clamps).
template <class State, class P>
auto combined_h(const std::vector<ConstraintSpec>& cs, const State& x, const P& p) {
  using R = std::remove_cvref_t<decltype(x.H)>;
  R h(kInf);
  for (const auto& c : cs)
    if (c.in_min()) h = vmin(h, constraint_value(c, x, p));
  return h;
}

}  // namespace GUARDRAILS_ARCH_NS
}  // namespace kernels
}  // namespace guardrails
