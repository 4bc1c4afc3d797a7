#pragma once

#include <array>

#include "guardrails/constraints.hpp"

namespace guardrails {

struct TurnEquilibrium {
  double N_z_star;
  double psi_dot;
  double R;
};

TurnEquilibrium turn_equilibrium(double phi_star, double V_T, double g);

FixedWingInput coordinated_turn_controller(const FixedWingState& x, const TurnParams& tp);
TurnDirection choose_turn_direction(const FixedWingState& x, const ConstraintSpec& fence);

// x.psi is read as an unwrapped heading; tp.psi_star likewise.
double turn_backup_set(const FixedWingState& x, const TurnParams& tp);

double clamp_load_factor(double u_z, double N_z_min, double N_z_max);

std::string to_string(TurnDirection d);

struct QuadBackupParams {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  Eigen::Vector3d half_lengths = Eigen::Vector3d(40.0, 40.0, 10.0);
  Eigen::Vector3d delta = Eigen::Vector3d(50.0, 50.0, 10.0);  // m^2
  double epsilon = 0.5;
  double K_v = 4.0;
  double K_R = 8.0;
  double K_omega = 1.0;
  double thrust_max_g = 2.5;  // thrust ceiling in multiples of m*g
  double tilt_max = 1.0471975511965976;  // rad; bound on the commanded thrust-axis tilt

  void validate() const;
};

// Per-axis h_i = r_i^2 - (p_i - c_i)^2.
Eigen::Vector3d quad_box_h(const QuadState& x, const QuadBackupParams& qp);
Eigen::Vector3d quad_reference_velocity(const QuadState& x, const QuadBackupParams& qp);

// Geometric velocity tracking; thrust saturated to [0, thrust_max_g*m*g].
QuadInput quad_velocity_tracking(const QuadState& x, const Eigen::Vector3d& v_ref, const QuadBackupParams& qp,
                                 const QuadParams& p);
QuadInput quad_backup_controller(const QuadState& x, const QuadBackupParams& qp, const QuadParams& p);
double quad_backup_set(const QuadState& x, const QuadBackupParams& qp);

}  // namespace guardrails
