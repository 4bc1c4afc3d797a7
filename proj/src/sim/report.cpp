#include <fstream>
#include <sstream>

#include "guardrails/sim/harness.hpp"

namespace guardrails::sim {

std::string render_summary(const SafetyReport& r) {
  std::ostringstream os;
  os << "scenario: " << r.scenario << " (" << to_string(r.model) << ")\n";
  os << "duration_s: " << r.duration << "  sim_dt_s: " << r.sim_dt << "\n";
  for (const auto& c : r.constraints) {
    os << "constraint " << c.name << " [" << c.kind << "]";
    if (!c.in_min) {
      os << " input clamp only\n";
      continue;
    }
    os << " min_h=" << format_number(c.min_h) << " min_raw=" << format_number(c.min_raw)
       << " tol_inv_raw=" << format_number(c.tol_inv_raw) << (c.pass ? " ok" : " VIOLATED") << "\n";
  }
  os << "max_lambda: " << format_number(r.max_lambda) << "\n";
  os << "intervention_occupancy: " << format_number(r.intervention_occupancy) << "\n";
  os << "intervention_episodes: " << r.intervention_episodes << "\n";
  os << "min_h_I: " << format_number(r.min_h_I) << "\n";
  if (r.model != ModelKind::quadrotor)
    os << "Nz_range_g: [" << format_number(r.min_nz) << ", " << format_number(r.max_nz) << "]\n";
  os << "max_input_limit_violation: " << format_number(r.max_input_violation) << "\n";
  if (r.aborted) os << "aborted: " << r.abort_reason << "\n";
  os << "result: " << (r.pass ? "PASS" : "FAIL") << "\n";
  return os.str();
}

namespace {

class SeriesWriter {
public:
  SeriesWriter(const std::filesystem::path& dir, const std::string& name, const std::string& header,
               std::vector<std::filesystem::path>& written)
      : path_(dir / (name + ".csv")), out_(path_) {
    if (!out_) throw std::runtime_error("cannot write report series " + path_.string());
    out_ << header << '\n';
    written.push_back(path_);
  }
  void row(std::initializer_list<double> vals) {
    bool first = true;
    for (double v : vals) {
      out_ << (first ? "" : ",") << format_number(v);
      first = false;
    }
    out_ << '\n';
  }

private:
  std::filesystem::path path_;
  std::ofstream out_;
};

double limit_ft(const ScenarioConfig& cfg, ConstraintKind kind) {
  const ConstraintSpec* c = cfg.safety.find(kind);
  return c ? m_to_ft(c->limit) : (kind == ConstraintKind::alt_floor ? -kInf : kInf);
}

}  // namespace

std::vector<std::filesystem::path> render_report(const SafetyReport& report, const SimTrace& trace,
                                                 const ScenarioConfig& cfg, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  {
    const auto p = dir / "summary.txt";
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << render_summary(report);
    written.push_back(p);
  }
  const auto& recs = trace.records;
  const double floor_ft = limit_ft(cfg, ConstraintKind::alt_floor);
  const double ceil_ft = limit_ft(cfg, ConstraintKind::alt_ceiling);

  if (trace.model == ModelKind::simplified) {
    // Altitude-limit figure layout: (a) altitude, (b) load factor trio, (c) pitch, (d) lambda.
    SeriesWriter a(dir, "panel_a_altitude_ft", "t_s,H_ft,floor_ft,ceiling_ft", written);
    SeriesWriter b(dir, "panel_b_load_factor", "t_s,uz_requested_g,uz_commanded_g,Nz_measured_g", written);
    SeriesWriter c(dir, "panel_c_pitch_deg", "t_s,theta_deg", written);
    SeriesWriter d(dir, "panel_d_lambda", "t_s,lambda,h_I", written);
    for (const auto& r : recs) {
      a.row({r.t, r.state[0], floor_ft, ceil_ft});
      b.row({r.t, r.u_d[0], r.u_out[0], r.state[2]});
      c.row({r.t, rad_to_deg(r.state[1])});
      d.row({r.t, r.lambda, r.h_I});
    }
  } else if (trace.model == ModelKind::fixed_wing) {
    // Geofence figure layout: (a) ground track, (b) h, (c) roll, (d) load factor, (e) roll rate, (f) lambda.
    SeriesWriter a(dir, "panel_a_ground_track", "t_s,pE_m,pN_m", written);
    SeriesWriter b(dir, "panel_b_safety_h", "t_s,h_min,h_I", written);
    SeriesWriter c(dir, "panel_c_roll_deg", "t_s,phi_deg", written);
    SeriesWriter d(dir, "panel_d_load_factor", "t_s,uz_requested_g,uz_commanded_g,Nz_measured_g", written);
    SeriesWriter e(dir, "panel_e_roll_rate", "t_s,uP_requested_radps,uP_commanded_radps,P_measured_radps", written);
    SeriesWriter f(dir, "panel_f_lambda", "t_s,lambda", written);
    SeriesWriter alt(dir, "altitude_ft", "t_s,H_ft,floor_ft,ceiling_ft", written);
    for (const auto& r : recs) {
      a.row({r.t, r.state[4], r.state[3]});
      b.row({r.t, r.h_min, r.h_I});
      c.row({r.t, rad_to_deg(r.state[0])});
      d.row({r.t, r.u_d[1], r.u_out[1], r.state[7]});
      e.row({r.t, r.u_d[0], r.u_out[0], r.state[6]});
      f.row({r.t, r.lambda});
      alt.row({r.t, r.state[5], floor_ft, ceil_ft});
    }
  } else {
    SeriesWriter a(dir, "panel_a_track", "t_s,px_m,py_m,pz_m", written);
    SeriesWriter b(dir, "panel_b_speed", "t_s,speed_mps", written);
    SeriesWriter c(dir, "panel_c_safety_h", "t_s,h_min,h_I", written);
    SeriesWriter d(dir, "panel_d_lambda", "t_s,lambda", written);
    for (const auto& r : recs) {
      a.row({r.t, r.state[0], r.state[1], r.state[2]});
      b.row({r.t, Eigen::Vector3d(r.state[7], r.state[8], r.state[9]).norm()});
      c.row({r.t, r.h_min, r.h_I});
      d.row({r.t, r.lambda});
    }
  }
  return written;
}

}  // namespace guardrails::sim
