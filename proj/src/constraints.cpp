#include "guardrails/constraints.hpp"

#include <set>

namespace guardrails {

void ConstraintSpec::validate() const {
  if (name.empty()) throw ConfigError("constraint without a name");
  if (!(scale > 0.0)) throw ConfigError("constraint '" + name + "': scale must be positive");
  if (kind == ConstraintKind::geofence) {
    if (std::fabs(normal.norm() - 1.0) > 1e-9) throw ConfigError("geofence '" + name + "': normal must be unit");
    if (!(eps_v > 0.0) || !(ttc_max > 0.0)) throw ConfigError("geofence '" + name + "': eps_v, ttc_max must be positive");
  }
  if (kind == ConstraintKind::box_axis) {
    if (axis < 0 || axis > 2) throw ConfigError("box_axis '" + name + "': axis must be 0, 1 or 2");
    if (!(half_length > 0.0)) throw ConfigError("box_axis '" + name + "': half_length must be positive");
  }
}

void TurnParams::validate() const {
  if (!(phi_star > 0.0 && phi_star < kPi / 2.0)) throw ConfigError("phi_star must lie in (0, pi/2)");
  if (!(K_phi > 0.0 && K_psi > 0.0 && K_H > 0.0 && K_theta > 0.0)) throw ConfigError("turn gains must be positive");
  if (!(sat_P.lo < sat_P.hi)) throw ConfigError("sat_P bounds out of order");
  if (!(sat_z.lo < sat_z.hi)) throw ConfigError("sat_z bounds out of order");
}

void SafetySpec::validate() const {
  if (constraints.empty()) throw ConfigError("safety spec needs at least one constraint");
  std::set<std::string> names;
  for (const auto& c : constraints) {
    c.validate();
    if (!names.insert(c.name).second) throw ConfigError("duplicate constraint name '" + c.name + "'");
  }
}

const ConstraintSpec* SafetySpec::find(ConstraintKind kind) const {
  for (const auto& c : constraints)
    if (c.kind == kind) return &c;
  return nullptr;
}

bool SafetySpec::has_min_terms() const {
  for (const auto& c : constraints)
    if (c.in_min()) return true;
  return false;
}

namespace {

ConstraintSpec base(std::string name, ConstraintKind kind, double limit, double scale) {
  ConstraintSpec c;
  c.name = std::move(name);
  c.kind = kind;
  c.limit = limit;
  c.scale = scale;
  return c;
}

}  // namespace

ConstraintSpec make_load_min(std::string name, double nz_min, double scale) {
  return base(std::move(name), ConstraintKind::load_min, nz_min, scale);
}
ConstraintSpec make_load_max(std::string name, double nz_max, double scale) {
  return base(std::move(name), ConstraintKind::load_max, nz_max, scale);
}
ConstraintSpec make_alt_floor(std::string name, double H_min_m, double scale) {
  return base(std::move(name), ConstraintKind::alt_floor, H_min_m, scale);
}
ConstraintSpec make_alt_ceiling(std::string name, double H_max_m, double scale) {
  return base(std::move(name), ConstraintKind::alt_ceiling, H_max_m, scale);
}
ConstraintSpec make_geofence(std::string name, Eigen::Vector2d point, Eigen::Vector2d normal, double scale) {
  ConstraintSpec c = base(std::move(name), ConstraintKind::geofence, 0.0, scale);
  c.point = point;
  c.normal = normal;
  return c;
}
ConstraintSpec make_geofence_ttc(std::string name, Eigen::Vector2d point, Eigen::Vector2d normal, double eps_v,
                                 double ttc_max) {
  ConstraintSpec c = make_geofence(std::move(name), point, normal, 1.0);
  c.measure = GeofenceMeasure::ttc;
  c.eps_v = eps_v;
  c.ttc_max = ttc_max;
  return c;
}
ConstraintSpec make_box_axis(std::string name, int axis, double center, double half_length, double scale) {
  ConstraintSpec c = base(std::move(name), ConstraintKind::box_axis, 0.0, scale);
  c.axis = axis;
  c.center = center;
  c.half_length = half_length;
  return c;
}

std::string to_string(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::load_min: return "load_min";
    case ConstraintKind::load_max: return "load_max";
    case ConstraintKind::alt_floor: return "alt_floor";
    case ConstraintKind::alt_ceiling: return "alt_ceiling";
    case ConstraintKind::geofence: return "geofence";
    case ConstraintKind::box_axis: return "box_axis";
  }
  return "unknown";
}

ConstraintKind constraint_kind_from_string(const std::string& s) {
  for (auto k : {ConstraintKind::load_min, ConstraintKind::load_max, ConstraintKind::alt_floor,
                 ConstraintKind::alt_ceiling, ConstraintKind::geofence, ConstraintKind::box_axis})
    if (to_string(k) == s) return k;
  throw ConfigError("unknown constraint kind '" + s + "'");
}

double inward_heading(const ConstraintSpec& fence) { return std::atan2(fence.normal.y(), fence.normal.x()); }

double eval_constraint(const ConstraintSpec& c, const FixedWingState& x, const FixedWingParams& p) {
  return kernels::constraint_value(c, x, p);
}

double eval_constraint(const ConstraintSpec& c, const SimplifiedState& x, const FixedWingParams& p) {
  return kernels::constraint_value(c, x, p);
}

double eval_constraint(const ConstraintSpec& c, const QuadState& x, const QuadParams& p) {
  return raw_constraint(c, x, p) / c.scale;
}

double raw_constraint(const ConstraintSpec& c, const FixedWingState& x, const FixedWingParams& p) {
  if (c.kind == ConstraintKind::geofence) return kernels::geofence_raw(c, x.p_n, x.p_e);
  return kernels::constraint_value(c, x, p) * c.scale;
}

double raw_constraint(const ConstraintSpec& c, const SimplifiedState& x, const FixedWingParams& p) {
  return kernels::constraint_value(c, x, p) * c.scale;
}

double raw_constraint(const ConstraintSpec& c, const QuadState& x, const QuadParams&) {
  if (c.kind != ConstraintKind::box_axis)
    throw MissingFieldError("constraint '" + c.name + "' is not defined for the quadrotor model");
  const double d = x.p(c.axis) - c.center;
  return c.half_length * c.half_length - d * d;
}

double geofence_ttc(const ConstraintSpec& c, const FixedWingState& x, const FixedWingParams& p) {
  if (c.kind != ConstraintKind::geofence) throw std::invalid_argument("geofence_ttc: not a geofence");
  return kernels::geofence_ttc(c, x, p);
}

std::string active_name(const SafetySpec& spec, int index) {
  if (index < 0 || index >= static_cast<int>(spec.constraints.size())) return "none";
  return spec.constraints[index].name;
}

}  // namespace guardrails
