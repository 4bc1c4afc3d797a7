#pragma once

#include <string>
#include <vector>

#include "guardrails/dynamics.hpp"

namespace guardrails {

struct SafetySpec {
  std::vector<ConstraintSpec> constraints;

  void validate() const;
  const ConstraintSpec* find(ConstraintKind kind) const;
  bool has_min_terms() const;
};

ConstraintSpec make_load_min(std::string name, double nz_min, double scale = 1.0);
ConstraintSpec make_load_max(std::string name, double nz_max, double scale = 1.0);
ConstraintSpec make_alt_floor(std::string name, double H_min_m, double scale = 1.0);
ConstraintSpec make_alt_ceiling(std::string name, double H_max_m, double scale = 1.0);
ConstraintSpec make_geofence(std::string name, Eigen::Vector2d point, Eigen::Vector2d normal, double scale = 1.0);
ConstraintSpec make_geofence_ttc(std::string name, Eigen::Vector2d point, Eigen::Vector2d normal,
                                 double eps_v = 1.0, double ttc_max = 120.0);
ConstraintSpec make_box_axis(std::string name, int axis, double center, double half_length, double scale = 1.0);

std::string to_string(ConstraintKind kind);
ConstraintKind constraint_kind_from_string(const std::string& s);

// Heading (rad, from north toward east) of the fence's inward normal.
double inward_heading(const ConstraintSpec& fence);

double eval_constraint(const ConstraintSpec& c, const FixedWingState& x, const FixedWingParams& p);
double eval_constraint(const ConstraintSpec& c, const SimplifiedState& x, const FixedWingParams& p);
double eval_constraint(const ConstraintSpec& c, const QuadState& x, const QuadParams& p);

// Un-normalized value in SI units (m, g, m^2); geofence gives signed distance.
double raw_constraint(const ConstraintSpec& c, const FixedWingState& x, const FixedWingParams& p);
double raw_constraint(const ConstraintSpec& c, const SimplifiedState& x, const FixedWingParams& p);
double raw_constraint(const ConstraintSpec& c, const QuadState& x, const QuadParams& p);

double geofence_ttc(const ConstraintSpec& c, const FixedWingState& x, const FixedWingParams& p);

struct Combined {
  double h = kInf;
  int active = -1;  // index into spec.constraints, -1 when nothing enters the min
};

template <class State, class Params>
Combined combine(const SafetySpec& spec, const State& x, const Params& p) {
  Combined out;
  for (std::size_t i = 0; i < spec.constraints.size(); ++i) {
    const auto& c = spec.constraints[i];
    if (!c.in_min()) continue;
    const double v = eval_constraint(c, x, p);
    if (out.active < 0 || v < out.h) {
      out.h = v;
      out.active = static_cast<int>(i);
    }
  }
  return out;
}

std::string active_name(const SafetySpec& spec, int index);

}  // namespace guardrails
