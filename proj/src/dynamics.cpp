#include "guardrails/dynamics.hpp"

#include <cmath>
#include <sstream>

namespace guardrails {

void FixedWingParams::validate() const {
  if (!(V_T > 0.0)) throw ConfigError("V_T must be positive");
  if (!(g > 0.0)) throw ConfigError("g must be positive");
  if (!(tau_P > 0.0)) throw ConfigError("tau_P must be positive");
  if (!(tau_z > 0.0)) throw ConfigError("tau_z must be positive");
}

void QuadParams::validate() const {
  if (!(m > 0.0)) throw ConfigError("quad mass must be positive");
  if (!J.isApprox(J.transpose(), 1e-12)) throw ConfigError("quad inertia must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(J);
  if (es.eigenvalues().minCoeff() <= 0.0) throw ConfigError("quad inertia must be positive definite");
}

FixedWingState fixed_wing_deriv(const FixedWingState& x, const FixedWingInput& u, const FixedWingParams& p) {
  if (std::fabs(std::cos(x.theta)) < 1e-6) throw SingularityError("fixed_wing_deriv: cos(theta) ~ 0");
  return kernels::fixed_wing_deriv(x, u, p);
}

SimplifiedState simplified_deriv(const SimplifiedState& x, double u_z, const FixedWingParams& p) {
  if (std::fabs(std::cos(x.theta)) < 1e-6) throw SingularityError("simplified_deriv: cos(theta) ~ 0");
  return kernels::simplified_deriv(x, u_z, p);
}

QuadState quad_deriv(const QuadState& x, const QuadInput& u, const QuadParams& p) {
  const double w = x.q(0), qx = x.q(1), qy = x.q(2), qz = x.q(3);
  const Eigen::Vector3d& om = x.omega;
  QuadState d;
  d.p = x.v;
  // 1/2 q (x) (0, omega)
  d.q << -0.5 * (qx * om.x() + qy * om.y() + qz * om.z()),
      0.5 * (w * om.x() + qy * om.z() - qz * om.y()),
      0.5 * (w * om.y() + qz * om.x() - qx * om.z()),
      0.5 * (w * om.z() + qx * om.y() - qy * om.x());
  const Eigen::Vector3d b3(2.0 * (qx * qz + w * qy), 2.0 * (qy * qz - w * qx), 1.0 - 2.0 * (qx * qx + qy * qy));
  d.v = (u.tau / p.m) * b3 - Eigen::Vector3d(0.0, 0.0, p.g);
  d.omega = p.J.ldlt().solve(u.M - om.cross(p.J * om));
  return d;
}

void normalize_state(double&) {}
void normalize_state(FixedWingState& x) { x.psi = kernels::wrap_pi(x.psi); }
void normalize_state(SimplifiedState&) {}
void normalize_state(QuadState& x) { x.q.normalize(); }

namespace {

template <class S>
bool all_finite(const S& s) {
  bool ok = true;
  for_each_field(s, [&ok](const auto& f) {
    if constexpr (std::is_same_v<std::decay_t<decltype(f)>, double>)
      ok = ok && std::isfinite(f);
    else
      ok = ok && f.allFinite();
  });
  return ok;
}

void check_pitch(double theta) {
  if (!(std::fabs(theta) < kPi / 2.0 - 1e-6)) {
    std::ostringstream os;
    os << "pitch " << theta << " rad reached the model singularity";
    throw ModelDomainError(os.str());
  }
}

}  // namespace

void FixedWingModel::check_domain(const State& x) {
  if (!all_finite(x)) throw ModelDomainError("non-finite fixed-wing state");
  check_pitch(x.theta);
  if (!(std::fabs(x.phi) < kPi / 2.0)) throw UprightViolation("aircraft is no longer upright");
}

void SimplifiedModel::check_domain(const State& x) {
  if (!all_finite(x)) throw ModelDomainError("non-finite simplified state");
  check_pitch(x.theta);
}

void QuadModel::check_domain(const State& x) {
  if (!all_finite(x)) throw ModelDomainError("non-finite quadrotor state");
  if (std::fabs(x.q.norm() - 1.0) > 1e-6) throw ModelDomainError("quaternion lost unit norm");
}

int rollout_steps(double T, double dt) {
  if (!(T > 0.0) || !(dt > 0.0)) throw std::invalid_argument("rollout: T and dt must be positive");
  const double ratio = T / dt;
  const long long n = std::llround(ratio);
  if (n < 1 || std::fabs(ratio - static_cast<double>(n)) > 1e-9 * std::max(1.0, ratio))
    throw std::invalid_argument("rollout: T must be an integer multiple of dt");
  return static_cast<int>(n);
}

}  // namespace guardrails
