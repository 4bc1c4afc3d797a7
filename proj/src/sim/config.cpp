#include "guardrails/sim/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "guardrails/sim/builtin.hpp"

namespace guardrails::sim {

namespace {

enum class Unit { none, angle, length, rate };

// Tracks which keys of a mapping were read so leftovers can be reported.
class Section {
public:
  Section(const YAML::Node& node, std::string path) : node_(node), path_(std::move(path)) {
    if (node_ && !node_.IsNull() && !node_.IsMap()) throw ConfigError(path_ + ": expected a mapping");
  }

  ~Section() = default;

  bool has(const std::string& key) const { return node_ && node_[key]; }

  YAML::Node take(const std::string& key) {
    used_.insert(key);
    return node_ ? node_[key] : YAML::Node();
  }

  std::string where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  template <class T>
  T scalar(const std::string& key, const T& fallback) {
    if (!has(key)) return fallback;
    return as<T>(take(key), where(key));
  }

  template <class T>
  T required(const std::string& key) {
    if (!has(key)) throw ConfigError(where(key) + ": required field missing");
    return as<T>(take(key), where(key));
  }

  // Reads base + unit suffix; angles accept _deg/_rad, lengths _ft/_m.
  double quantity(const std::string& base, Unit unit, double fallback) {
    const auto opts = options(base, unit);
    double out = fallback;
    int found = 0;
    for (const auto& [suffix, factor] : opts) {
      if (!has(base + suffix)) continue;
      out = as<double>(take(base + suffix), where(base + suffix)) * factor;
      ++found;
    }
    if (found > 1) throw ConfigError(where(base) + ": given in more than one unit");
    return out;
  }

  bool has_quantity(const std::string& base, Unit unit) const {
    for (const auto& [suffix, factor] : options(base, unit))
      if (has(base + suffix)) return true;
    return false;
  }

  std::vector<double> list(const std::string& key, std::size_t n) {
    const YAML::Node v = take(key);
    if (!v.IsSequence() || v.size() != n)
      throw ConfigError(where(key) + ": expected a list of " + std::to_string(n) + " numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(as<double>(v[i], where(key)));
    return out;
  }

  void finish() const {
    if (!node_ || node_.IsNull()) return;
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!used_.count(key)) throw ConfigError(where(key) + ": unknown key");
    }
  }

private:
  static std::vector<std::pair<std::string, double>> options(const std::string&, Unit unit) {
    switch (unit) {
      case Unit::angle: return {{"_rad", 1.0}, {"_deg", kPi / 180.0}};
      case Unit::length: return {{"_m", 1.0}, {"_ft", kFeetToMeters}};
      case Unit::rate: return {{"_radps", 1.0}, {"_degps", kPi / 180.0}};
      case Unit::none: return {{"", 1.0}};
    }
    return {};
  }

  template <class T>
  static T as(const YAML::Node& n, const std::string& where) {
    try {
      return n.as<T>();
    } catch (const YAML::Exception&) {
      throw ConfigError(where + ": bad value");
    }
  }

  YAML::Node node_;
  std::string path_;
  std::set<std::string> used_;
};

Saturation read_sat(Section& s, const std::string& key, Saturation fallback) {
  if (!s.has(key)) return fallback;
  const auto v = s.list(key, 2);
  return {v[0], v[1]};
}

Eigen::Vector3d read_vec3(Section& s, const std::string& key, const Eigen::Vector3d& fallback) {
  if (!s.has(key)) return fallback;
  const auto v = s.list(key, 3);
  return {v[0], v[1], v[2]};
}

// Pilot parameter names in files carry units; SI key -> (file base, unit).
const std::map<std::string, std::pair<std::string, Unit>>& pilot_param_units() {
  static const std::map<std::string, std::pair<std::string, Unit>> m = {
      {"uP", {"uP", Unit::rate}},       {"uP_end", {"uP_end", Unit::rate}},
      {"uz", {"uz_g", Unit::none}},     {"uz_end", {"uz_end_g", Unit::none}},
      {"pitch", {"pitch", Unit::angle}}, {"bank", {"bank", Unit::angle}},
      {"K_pitch", {"K_pitch", Unit::none}}, {"K_phi", {"K_phi", Unit::none}},
      {"altitude", {"altitude", Unit::length}}, {"K_alt", {"K_alt", Unit::none}},
      {"pitch_max", {"pitch_max", Unit::angle}}, {"heading", {"heading", Unit::angle}},
      {"K_heading", {"K_heading", Unit::none}}, {"bank_max", {"bank_max", Unit::angle}},
      {"vx", {"vx_mps", Unit::none}},   {"vy", {"vy_mps", Unit::none}},
      {"vz", {"vz_mps", Unit::none}},
  };
  return m;
}

std::string si_suffix(Unit u) {
  switch (u) {
    case Unit::angle: return "_rad";
    case Unit::length: return "_m";
    case Unit::rate: return "_radps";
    case Unit::none: return "";
  }
  return "";
}

void parse_model(Section s, ScenarioConfig& c) {
  c.model = model_kind_from_string(s.required<std::string>("kind"));
  c.fw.V_T = s.scalar("V_T_mps", c.fw.V_T);
  c.fw.g = s.scalar("g_mps2", c.fw.g);
  c.fw.tau_P = s.scalar("tau_P_s", c.fw.tau_P);
  c.fw.tau_z = s.scalar("tau_z_s", c.fw.tau_z);
  c.quad.g = c.fw.g;
  c.quad.m = s.scalar("mass_kg", c.quad.m);
  if (s.has("inertia_kgm2")) {
    const auto J = s.list("inertia_kgm2", 9);
    for (int i = 0; i < 9; ++i) c.quad.J(i / 3, i % 3) = J[i];
  }

  Section x(s.take("initial_state"), s.where("initial_state"));
  switch (c.model) {
    case ModelKind::fixed_wing: {
      auto& f = c.fw_x0;
      f.phi = x.quantity("phi", Unit::angle, 0.0);
      f.theta = x.quantity("theta", Unit::angle, 0.0);
      f.psi = x.quantity("psi", Unit::angle, 0.0);
      f.p_n = x.quantity("pN", Unit::length, 0.0);
      f.p_e = x.quantity("pE", Unit::length, 0.0);
      f.H = x.quantity("H", Unit::length, 0.0);
      f.P = x.quantity("P", Unit::rate, 0.0);
      f.N_z = x.scalar("Nz_g", 1.0);
      break;
    }
    case ModelKind::simplified:
      c.simple_x0.H = x.quantity("H", Unit::length, 0.0);
      c.simple_x0.theta = x.quantity("theta", Unit::angle, 0.0);
      c.simple_x0.N_z = x.scalar("Nz_g", 1.0);
      break;
    case ModelKind::quadrotor: {
      c.quad_x0.p = read_vec3(x, "p_m", c.quad_x0.p);
      if (x.has("q_wxyz")) {
        const auto q = x.list("q_wxyz", 4);
        c.quad_x0.q = Eigen::Vector4d(q[0], q[1], q[2], q[3]);
      }
      c.quad_x0.v = read_vec3(x, "v_mps", c.quad_x0.v);
      c.quad_x0.omega = read_vec3(x, "omega_radps", c.quad_x0.omega);
      break;
    }
  }
  x.finish();

  if (s.has("input_limits")) {
    Section l(s.take("input_limits"), s.where("input_limits"));
    if (c.model == ModelKind::quadrotor) {
      const auto tau = read_sat(l, "tau_N", {c.quad_limits.lo.tau, c.quad_limits.hi.tau});
      const auto M = read_sat(l, "M_Nm", {c.quad_limits.lo.M(0), c.quad_limits.hi.M(0)});
      c.quad_limits.lo = {tau.lo, Eigen::Vector3d::Constant(M.lo)};
      c.quad_limits.hi = {tau.hi, Eigen::Vector3d::Constant(M.hi)};
    } else {
      const auto uP = read_sat(l, "uP_radps", {c.fw_limits.lo.u_P, c.fw_limits.hi.u_P});
      const auto uz = read_sat(l, "uz_g", {c.fw_limits.lo.u_z, c.fw_limits.hi.u_z});
      c.fw_limits = {{uP.lo, uz.lo}, {uP.hi, uz.hi}};
      c.simple_limits = {{uz.lo}, {uz.hi}};
    }
    l.finish();
  }
  s.finish();
}

ConstraintSpec parse_constraint(Section s) {
  ConstraintSpec c;
  c.name = s.required<std::string>("name");
  c.kind = constraint_kind_from_string(s.required<std::string>("kind"));
  c.scale = s.scalar("scale", 1.0);
  switch (c.kind) {
    case ConstraintKind::load_min:
    case ConstraintKind::load_max: c.limit = s.required<double>("limit_g"); break;
    case ConstraintKind::alt_floor:
    case ConstraintKind::alt_ceiling:
      if (!s.has_quantity("limit", Unit::length)) throw ConfigError(s.where("limit_ft") + ": required field missing");
      c.limit = s.quantity("limit", Unit::length, 0.0);
      break;
    case ConstraintKind::geofence: {
      const auto pt = s.list("point_m", 2);
      const auto n = s.list("normal", 2);
      c.point = {pt[0], pt[1]};
      c.normal = {n[0], n[1]};
      const auto measure = s.scalar<std::string>("measure", "distance");
      if (measure == "ttc") c.measure = GeofenceMeasure::ttc;
      else if (measure != "distance") throw ConfigError(s.where("measure") + ": expected distance or ttc");
      c.eps_v = s.scalar("eps_v_mps", c.eps_v);
      c.ttc_max = s.scalar("ttc_max_s", c.ttc_max);
      break;
    }
    case ConstraintKind::box_axis:
      c.axis = s.required<int>("axis");
      c.center = s.required<double>("center_m");
      c.half_length = s.required<double>("half_length_m");
      break;
  }
  s.finish();
  c.validate();
  return c;
}

void parse_safety(Section s, ScenarioConfig& c) {
  const YAML::Node list = s.take("constraints");
  if (!list || !list.IsSequence()) throw ConfigError("safety.constraints: expected a list");
  c.safety.constraints.clear();
  for (std::size_t i = 0; i < list.size(); ++i)
    c.safety.constraints.push_back(parse_constraint(Section(list[i], "safety.constraints[" + std::to_string(i) + "]")));
  s.finish();
}

void parse_backup(Section s, ScenarioConfig& c) {
  auto& b = c.fw_backup;
  if (s.has("turn")) {
    Section t(s.take("turn"), s.where("turn"));
    b.turn.phi_star = t.quantity("phi_star", Unit::angle, b.turn.phi_star);
    b.turn.K_phi = t.scalar("K_phi", b.turn.K_phi);
    b.turn.K_psi = t.scalar("K_psi", b.turn.K_psi);
    b.turn.K_H = t.scalar("K_H", b.turn.K_H);
    b.turn.K_theta = t.scalar("K_theta", b.turn.K_theta);
    b.turn.sat_P = read_sat(t, "sat_P_radps", b.turn.sat_P);
    b.turn.sat_z = read_sat(t, "sat_z_g", b.turn.sat_z);
    t.finish();
  }
  b.altitude_margin = s.quantity("altitude_margin", Unit::length, b.altitude_margin);
  b.turn_tolerance = s.quantity("turn_tolerance", Unit::angle, b.turn_tolerance);
  b.turn_scale = s.scalar("turn_scale", b.turn_scale);
  b.excursion_gain = s.scalar("excursion_gain", b.excursion_gain);
  if (s.has("quad")) {
    Section q(s.take("quad"), s.where("quad"));
    auto& qp = c.quad_backup.params;
    qp.center = read_vec3(q, "center_m", qp.center);
    qp.half_lengths = read_vec3(q, "half_lengths_m", qp.half_lengths);
    qp.delta = read_vec3(q, "delta_m2", qp.delta);
    qp.epsilon = q.scalar("epsilon_mps", qp.epsilon);
    qp.K_v = q.scalar("K_v", qp.K_v);
    qp.K_R = q.scalar("K_R", qp.K_R);
    qp.K_omega = q.scalar("K_omega", qp.K_omega);
    qp.thrust_max_g = q.scalar("thrust_max_g", qp.thrust_max_g);
    qp.tilt_max = q.quantity("tilt_max", Unit::angle, qp.tilt_max);
    q.finish();
  }
  const bool quad = c.model == ModelKind::quadrotor;
  const double horizon = s.scalar("horizon_s", quad ? c.quad_backup.horizon : b.horizon);
  const double rdt = s.scalar("rollout_dt_s", quad ? c.quad_backup.rollout_dt : b.rollout_dt);
  if (quad) {
    c.quad_backup.horizon = horizon;
    c.quad_backup.rollout_dt = rdt;
  } else {
    b.horizon = horizon;
    b.rollout_dt = rdt;
  }
  s.finish();
}

PilotPhase parse_phase(Section s) {
  PilotPhase ph;
  ph.start = s.required<double>("start_s");
  ph.end = s.required<double>("end_s");
  ph.law = pilot_law_from_string(s.required<std::string>("law"));
  if (s.has("params")) {
    Section p(s.take("params"), s.where("params"));
    for (const auto& key : pilot_law_params(ph.law)) {
      const auto& [base, unit] = pilot_param_units().at(key);
      if (p.has_quantity(base, unit)) ph.params[key] = p.quantity(base, unit, 0.0);
    }
    p.finish();
  }
  s.finish();
  return ph;
}

void parse_pilot(Section s, ScenarioConfig& c) {
  auto& pl = c.pilot;
  pl.name = s.scalar<std::string>("name", pl.name);
  pl.uP_noise = s.scalar("uP_noise_radps", pl.uP_noise);
  pl.uz_noise = s.scalar("uz_noise_g", pl.uz_noise);
  pl.stale.input_timeout = s.scalar("input_timeout_s", pl.stale.input_timeout);
  pl.stale.decay_time = s.scalar("decay_time_s", pl.stale.decay_time);
  pl.phases.clear();
  if (s.has("phases")) {
    const YAML::Node list = s.take("phases");
    if (!list.IsSequence()) throw ConfigError("pilot.phases: expected a list");
    for (std::size_t i = 0; i < list.size(); ++i)
      pl.phases.push_back(parse_phase(Section(list[i], "pilot.phases[" + std::to_string(i) + "]")));
  }
  pl.replay.clear();
  if (s.has("replay")) {
    const YAML::Node list = s.take("replay");
    if (!list.IsSequence()) throw ConfigError("pilot.replay: expected a list of [t_s, uP_radps, uz_g]");
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (!list[i].IsSequence() || list[i].size() != 3)
        throw ConfigError("pilot.replay[" + std::to_string(i) + "]: expected [t_s, uP_radps, uz_g]");
      pl.replay.push_back({list[i][0].as<double>(), list[i][1].as<double>(), list[i][2].as<double>()});
    }
  }
  s.finish();
}

void parse_run(Section s, ScenarioConfig& c) {
  c.duration = s.scalar("duration_s", c.duration);
  c.sim_dt = s.scalar("sim_dt_s", c.sim_dt);
  c.seed = s.scalar<std::uint64_t>("seed", c.seed);
  s.finish();
}

YAML::Node seq(std::initializer_list<double> v) {
  YAML::Node n(YAML::NodeType::Sequence);
  for (double d : v) n.push_back(d);
  n.SetStyle(YAML::EmitterStyle::Flow);
  return n;
}

YAML::Node seq3(const Eigen::Vector3d& v) { return seq({v(0), v(1), v(2)}); }

}  // namespace

ScenarioConfig parse_scenario(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("scenario document: ") + e.what());
  }
  Section top(root, "");
  ScenarioConfig c;
  c.name = top.required<std::string>("name");
  c.description = top.scalar<std::string>("description", "");
  if (!top.has("model")) throw ConfigError("model: required section missing");
  parse_model(Section(top.take("model"), "model"), c);
  if (!top.has("safety")) throw ConfigError("safety: required section missing");
  parse_safety(Section(top.take("safety"), "safety"), c);
  if (top.has("backup")) parse_backup(Section(top.take("backup"), "backup"), c);
  if (top.has("blend")) {
    Section b(top.take("blend"), "blend");
    c.blend.beta = b.scalar("beta", c.blend.beta);
    b.finish();
  }
  if (!top.has("pilot")) throw ConfigError("pilot: required section missing");
  parse_pilot(Section(top.take("pilot"), "pilot"), c);
  if (top.has("run")) parse_run(Section(top.take("run"), "run"), c);
  top.finish();
  c.validate();
  return c;
}

ScenarioConfig load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_scenario(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string dump_scenario(const ScenarioConfig& c) {
  YAML::Node root;
  root["name"] = c.name;
  if (!c.description.empty()) root["description"] = c.description;

  YAML::Node model;
  model["kind"] = to_string(c.model);
  YAML::Node x0;
  if (c.model == ModelKind::quadrotor) {
    model["mass_kg"] = c.quad.m;
    model["g_mps2"] = c.quad.g;
    YAML::Node J(YAML::NodeType::Sequence);
    for (int i = 0; i < 9; ++i) J.push_back(c.quad.J(i / 3, i % 3));
    J.SetStyle(YAML::EmitterStyle::Flow);
    model["inertia_kgm2"] = J;
    x0["p_m"] = seq3(c.quad_x0.p);
    x0["q_wxyz"] = seq({c.quad_x0.q(0), c.quad_x0.q(1), c.quad_x0.q(2), c.quad_x0.q(3)});
    x0["v_mps"] = seq3(c.quad_x0.v);
    x0["omega_radps"] = seq3(c.quad_x0.omega);
    model["initial_state"] = x0;
    model["input_limits"]["tau_N"] = seq({c.quad_limits.lo.tau, c.quad_limits.hi.tau});
    model["input_limits"]["M_Nm"] = seq({c.quad_limits.lo.M(0), c.quad_limits.hi.M(0)});
  } else {
    model["V_T_mps"] = c.fw.V_T;
    model["g_mps2"] = c.fw.g;
    model["tau_P_s"] = c.fw.tau_P;
    model["tau_z_s"] = c.fw.tau_z;
    if (c.model == ModelKind::fixed_wing) {
      const auto& f = c.fw_x0;
      x0["phi_rad"] = f.phi;
      x0["theta_rad"] = f.theta;
      x0["psi_rad"] = f.psi;
      x0["pN_m"] = f.p_n;
      x0["pE_m"] = f.p_e;
      x0["H_m"] = f.H;
      x0["P_radps"] = f.P;
      x0["Nz_g"] = f.N_z;
    } else {
      x0["H_m"] = c.simple_x0.H;
      x0["theta_rad"] = c.simple_x0.theta;
      x0["Nz_g"] = c.simple_x0.N_z;
    }
    model["initial_state"] = x0;
    model["input_limits"]["uP_radps"] = seq({c.fw_limits.lo.u_P, c.fw_limits.hi.u_P});
    model["input_limits"]["uz_g"] = seq({c.fw_limits.lo.u_z, c.fw_limits.hi.u_z});
  }
  root["model"] = model;

  YAML::Node cons(YAML::NodeType::Sequence);
  for (const auto& k : c.safety.constraints) {
    YAML::Node n;
    n["name"] = k.name;
    n["kind"] = to_string(k.kind);
    switch (k.kind) {
      case ConstraintKind::load_min:
      case ConstraintKind::load_max: n["limit_g"] = k.limit; break;
      case ConstraintKind::alt_floor:
      case ConstraintKind::alt_ceiling: n["limit_m"] = k.limit; break;
      case ConstraintKind::geofence:
        n["point_m"] = seq({k.point(0), k.point(1)});
        n["normal"] = seq({k.normal(0), k.normal(1)});
        n["measure"] = k.measure == GeofenceMeasure::ttc ? "ttc" : "distance";
        n["eps_v_mps"] = k.eps_v;
        n["ttc_max_s"] = k.ttc_max;
        break;
      case ConstraintKind::box_axis:
        n["axis"] = k.axis;
        n["center_m"] = k.center;
        n["half_length_m"] = k.half_length;
        break;
    }
    n["scale"] = k.scale;
    cons.push_back(n);
  }
  root["safety"]["constraints"] = cons;

  YAML::Node backup;
  if (c.model == ModelKind::quadrotor) {
    const auto& qp = c.quad_backup.params;
    backup["quad"]["center_m"] = seq3(qp.center);
    backup["quad"]["half_lengths_m"] = seq3(qp.half_lengths);
    backup["quad"]["delta_m2"] = seq3(qp.delta);
    backup["quad"]["epsilon_mps"] = qp.epsilon;
    backup["quad"]["K_v"] = qp.K_v;
    backup["quad"]["K_R"] = qp.K_R;
    backup["quad"]["K_omega"] = qp.K_omega;
    backup["quad"]["thrust_max_g"] = qp.thrust_max_g;
    backup["quad"]["tilt_max_rad"] = qp.tilt_max;
    backup["horizon_s"] = c.quad_backup.horizon;
    backup["rollout_dt_s"] = c.quad_backup.rollout_dt;
  } else {
    const auto& b = c.fw_backup;
    backup["turn"]["phi_star_rad"] = b.turn.phi_star;
    backup["turn"]["K_phi"] = b.turn.K_phi;
    backup["turn"]["K_psi"] = b.turn.K_psi;
    backup["turn"]["K_H"] = b.turn.K_H;
    backup["turn"]["K_theta"] = b.turn.K_theta;
    backup["turn"]["sat_P_radps"] = seq({b.turn.sat_P.lo, b.turn.sat_P.hi});
    backup["turn"]["sat_z_g"] = seq({b.turn.sat_z.lo, b.turn.sat_z.hi});
    backup["altitude_margin_m"] = b.altitude_margin;
    backup["turn_tolerance_rad"] = b.turn_tolerance;
    backup["turn_scale"] = b.turn_scale;
    backup["excursion_gain"] = b.excursion_gain;
    backup["horizon_s"] = b.horizon;
    backup["rollout_dt_s"] = b.rollout_dt;
  }
  root["backup"] = backup;
  root["blend"]["beta"] = c.blend.beta;

  YAML::Node pilot;
  pilot["name"] = c.pilot.name;
  pilot["uP_noise_radps"] = c.pilot.uP_noise;
  pilot["uz_noise_g"] = c.pilot.uz_noise;
  pilot["input_timeout_s"] = c.pilot.stale.input_timeout;
  pilot["decay_time_s"] = c.pilot.stale.decay_time;
  if (c.pilot.replay.empty()) {
    YAML::Node phases(YAML::NodeType::Sequence);
    for (const auto& ph : c.pilot.phases) {
      YAML::Node n;
      n["start_s"] = ph.start;
      n["end_s"] = ph.end;
      n["law"] = to_string(ph.law);
      for (const auto& [k, v] : ph.params) {
        const auto& [base, unit] = pilot_param_units().at(k);
        n["params"][base + si_suffix(unit)] = v;
      }
      phases.push_back(n);
    }
    pilot["phases"] = phases;
  } else {
    YAML::Node replay(YAML::NodeType::Sequence);
    for (const auto& e : c.pilot.replay) replay.push_back(seq({e.t, e.uP_d, e.uz_d}));
    pilot["replay"] = replay;
  }
  root["pilot"] = pilot;

  root["run"]["duration_s"] = c.duration;
  root["run"]["sim_dt_s"] = c.sim_dt;
  root["run"]["seed"] = c.seed;

  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << root;
  return std::string(out.c_str()) + "\n";
}

ScenarioConfig resolve_scenario(const std::string& name_or_path) {
  if (auto b = find_builtin(name_or_path)) return *b;
  if (std::filesystem::exists(name_or_path)) return load_scenario_file(name_or_path);
  throw ConfigError("no built-in scenario or file named '" + name_or_path + "'");
}

}  // namespace guardrails::sim
