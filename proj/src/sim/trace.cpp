#include "guardrails/sim/trace.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace guardrails::sim {

std::vector<std::string> state_columns(ModelKind m) {
  switch (m) {
    case ModelKind::fixed_wing:
      return {"phi_rad", "theta_rad", "psi_rad", "pN_m", "pE_m", "H_ft", "P_radps", "Nz_g"};
    case ModelKind::simplified: return {"H_ft", "theta_rad", "Nz_g"};
    case ModelKind::quadrotor:
      return {"px_m", "py_m", "pz_m", "qw", "qx", "qy", "qz", "vx_mps", "vy_mps", "vz_mps", "wx_radps", "wy_radps",
              "wz_radps"};
  }
  return {};
}

namespace {

struct InputColumn {
  std::string name;
  std::string unit;
};

std::vector<InputColumn> input_parts(ModelKind m) {
  switch (m) {
    case ModelKind::fixed_wing: return {{"uP", "radps"}, {"uz", "g"}};
    case ModelKind::simplified: return {{"uz", "g"}};
    case ModelKind::quadrotor: return {{"tau", "N"}, {"Mx", "Nm"}, {"My", "Nm"}, {"Mz", "Nm"}};
  }
  return {};
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& s, const std::filesystem::path& path, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw std::runtime_error(path.string() + ":" + std::to_string(line) + ": bad number '" + s + "'");
  return v;
}

}  // namespace

std::vector<std::string> input_columns(ModelKind m) {
  std::vector<std::string> out;
  for (const auto& c : input_parts(m)) out.push_back(c.name);
  return out;
}

std::string csv_header(ModelKind m) {
  std::string h = "t_s";
  for (const auto& c : state_columns(m)) h += "," + c;
  for (const char* tag : {"d", "out"})
    for (const auto& c : input_parts(m)) h += "," + c.name + "_" + tag + "_" + c.unit;
  h += ",lambda,h_I,h_min,active_constraint";
  return h;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_row(const SimTrace&, const TraceRecord& r) {
  std::string s = format_number(r.t);
  for (double v : r.state) s += "," + format_number(v);
  for (double v : r.u_d) s += "," + format_number(v);
  for (double v : r.u_out) s += "," + format_number(v);
  s += "," + format_number(r.lambda) + "," + format_number(r.h_I) + "," + format_number(r.h_min) + "," +
       r.active_constraint;
  return s;
}

void export_trace(const SimTrace& trace, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open trace file " + path.string());
  out << csv_header(trace.model) << '\n';
  for (const auto& r : trace.records) out << csv_row(trace, r) << '\n';
  if (!out) throw std::runtime_error("failed writing trace file " + path.string());
}

SimTrace import_trace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open trace file " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": empty trace file");
  SimTrace trace;
  bool known = false;
  for (auto m : {ModelKind::fixed_wing, ModelKind::simplified, ModelKind::quadrotor}) {
    if (line == csv_header(m)) {
      trace.model = m;
      known = true;
    }
  }
  if (!known) throw std::runtime_error(path.string() + ": unrecognized trace header");
  const std::size_t ns = state_columns(trace.model).size();
  const std::size_t ni = input_parts(trace.model).size();
  const std::size_t ncols = 1 + ns + 2 * ni + 4;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != ncols)
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": expected " + std::to_string(ncols) +
                               " columns");
    TraceRecord r;
    std::size_t i = 0;
    r.t = parse_number(cells[i++], path, lineno);
    for (std::size_t k = 0; k < ns; ++k) r.state.push_back(parse_number(cells[i++], path, lineno));
    for (std::size_t k = 0; k < ni; ++k) r.u_d.push_back(parse_number(cells[i++], path, lineno));
    for (std::size_t k = 0; k < ni; ++k) r.u_out.push_back(parse_number(cells[i++], path, lineno));
    r.lambda = parse_number(cells[i++], path, lineno);
    r.h_I = parse_number(cells[i++], path, lineno);
    r.h_min = parse_number(cells[i++], path, lineno);
    r.active_constraint = cells[i++];
    trace.records.push_back(std::move(r));
  }
  return trace;
}

std::vector<double> trace_state(const FixedWingState& x) {
  return {x.phi, x.theta, x.psi, x.p_n, x.p_e, m_to_ft(x.H), x.P, x.N_z};
}
std::vector<double> trace_state(const SimplifiedState& x) { return {m_to_ft(x.H), x.theta, x.N_z}; }
std::vector<double> trace_state(const QuadState& x) {
  return {x.p.x(), x.p.y(), x.p.z(), x.q(0), x.q(1), x.q(2), x.q(3),
          x.v.x(), x.v.y(), x.v.z(), x.omega.x(), x.omega.y(), x.omega.z()};
}
std::vector<double> trace_input(const FixedWingInput& u) { return {u.u_P, u.u_z}; }
std::vector<double> trace_input(const SimplifiedInput& u) { return {u.u_z}; }
std::vector<double> trace_input(const QuadInput& u) { return {u.tau, u.M.x(), u.M.y(), u.M.z()}; }

}  // namespace guardrails::sim
