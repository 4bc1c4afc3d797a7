#include "guardrails/backup.hpp"

namespace guardrails {

TurnEquilibrium turn_equilibrium(double phi_star, double V_T, double g) {
  if (!(phi_star > 0.0 && phi_star < kPi / 2.0)) throw std::domain_error("turn_equilibrium: phi* outside (0, pi/2)");
  const double t = std::tan(phi_star);
  return {1.0 / std::cos(phi_star), (g / V_T) * t, V_T * V_T / (g * t)};
}

namespace {
double sign_of(TurnDirection d) { return d == TurnDirection::right ? 1.0 : -1.0; }
}  // namespace

FixedWingInput coordinated_turn_controller(const FixedWingState& x, const TurnParams& tp) {
  if (!(std::fabs(x.phi) < kPi / 2.0)) throw UprightViolation("coordinated_turn_controller: |phi| >= pi/2");
  return kernels::turn_control(x, sign_of(tp.direction), tp.psi_star, tp.H_star, tp);
}

TurnDirection choose_turn_direction(const FixedWingState& x, const ConstraintSpec& fence) {
  if (fence.kind != ConstraintKind::geofence) throw std::invalid_argument("choose_turn_direction: not a geofence");
  return kernels::turn_direction_sign(x.psi, inward_heading(fence)) > 0.0 ? TurnDirection::right
                                                                           : TurnDirection::left;
}

double turn_backup_set(const FixedWingState& x, const TurnParams& tp) {
  return sign_of(tp.direction) * (x.psi - tp.psi_star);
}

double clamp_load_factor(double u_z, double N_z_min, double N_z_max) {
  if (!(N_z_min < N_z_max)) throw std::invalid_argument("clamp_load_factor: limits out of order");
  return std::min(std::max(u_z, N_z_min), N_z_max);
}

std::string to_string(TurnDirection d) { return d == TurnDirection::right ? "right" : "left"; }

void QuadBackupParams::validate() const {
  if (!(half_lengths.minCoeff() > 0.0)) throw ConfigError("box half-lengths must be positive");
  if (!(delta.minCoeff() >= 0.0)) throw ConfigError("box deltas must be non-negative");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (!(K_v > 0.0 && K_R > 0.0 && K_omega > 0.0)) throw ConfigError("quad tracking gains must be positive");
  if (!(thrust_max_g > 1.0)) throw ConfigError("thrust_max_g must exceed 1");
  if (!(tilt_max > 0.0 && tilt_max < kPi / 2.0)) throw ConfigError("tilt_max must lie in (0, pi/2)");
}

Eigen::Vector3d quad_box_h(const QuadState& x, const QuadBackupParams& qp) {
  const Eigen::Vector3d d = x.p - qp.center;
  return qp.half_lengths.cwiseProduct(qp.half_lengths) - d.cwiseProduct(d);
}

Eigen::Vector3d quad_reference_velocity(const QuadState& x, const QuadBackupParams& qp) {
  const Eigen::Vector3d h = quad_box_h(x, qp);
  Eigen::Vector3d v_r = Eigen::Vector3d::Zero();
  for (int i = 0; i < 3; ++i) {
    if (h(i) >= qp.delta(i)) continue;
    const double toward_center = x.p(i) >= qp.center(i) ? -1.0 : 1.0;
    v_r(i) = toward_center * (qp.delta(i) - h(i));
  }
  return v_r;
}

namespace {
Eigen::Vector3d vee(const Eigen::Matrix3d& S) { return {S(2, 1), S(0, 2), S(1, 0)}; }
}  // namespace

QuadInput quad_velocity_tracking(const QuadState& x, const Eigen::Vector3d& v_ref, const QuadBackupParams& qp,
                                 const QuadParams& p) {
  const Eigen::Matrix3d R = x.quat().normalized().toRotationMatrix();
  const Eigen::Vector3d e3(0.0, 0.0, 1.0);
  Eigen::Vector3d a_d = qp.K_v * (v_ref - x.v) + p.g * e3;
  // v_ref grows with wall penetration (m^2/s); without a tilt bound the tracker
  // asks for a sideways thrust axis and drops out of the sky.
  a_d.z() = std::max(a_d.z(), 0.2 * p.g);
  const double a_h = std::hypot(a_d.x(), a_d.y());
  const double a_h_max = a_d.z() * std::tan(qp.tilt_max);
  if (a_h > a_h_max) {
    a_d.x() *= a_h_max / a_h;
    a_d.y() *= a_h_max / a_h;
  }

  QuadInput u;
  u.tau = std::clamp(p.m * a_d.dot(R.col(2)), 0.0, qp.thrust_max_g * p.m * p.g);

  const double an = a_d.norm();
  const Eigen::Vector3d b3 = an > 1e-9 ? Eigen::Vector3d(a_d / an) : e3;
  Eigen::Vector3d b2 = b3.cross(R.col(0));
  if (b2.norm() < 1e-9) b2 = b3.cross(R.col(1)).cross(b3);
  b2.normalize();
  Eigen::Matrix3d R_d;
  R_d.col(0) = b2.cross(b3);
  R_d.col(1) = b2;
  R_d.col(2) = b3;

  const Eigen::Vector3d e_R = 0.5 * vee(R_d.transpose() * R - R.transpose() * R_d);
  u.M = -qp.K_R * e_R - qp.K_omega * x.omega + x.omega.cross(p.J * x.omega);
  return u;
}

QuadInput quad_backup_controller(const QuadState& x, const QuadBackupParams& qp, const QuadParams& p) {
  return quad_velocity_tracking(x, quad_reference_velocity(x, qp), qp, p);
}

double quad_backup_set(const QuadState& x, const QuadBackupParams& qp) {
  return std::min(qp.epsilon - x.v.norm(), quad_box_h(x, qp).minCoeff());
}

}  // namespace guardrails
