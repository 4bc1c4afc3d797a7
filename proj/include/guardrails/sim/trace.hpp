#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "guardrails/sim/scenario.hpp"

namespace guardrails::sim {

// One tick. State and inputs are stored in the CSV's units (altitude in ft)
// so export/import round-trips exactly.
struct TraceRecord {
  double t = 0.0;
  std::vector<double> state;
  std::vector<double> u_d;
  std::vector<double> u_out;
  double lambda = 0.0;
  double h_I = kInf;
  double h_min = kInf;
  std::vector<double> h_values;    // normalized, per constraint (not in CSV)
  std::vector<double> raw_values;  // SI, per constraint (not in CSV)
  std::string active_constraint = "none";
};

struct SimTrace {
  ModelKind model = ModelKind::fixed_wing;
  std::vector<std::string> constraint_names;
  std::vector<TraceRecord> records;
};

std::vector<std::string> state_columns(ModelKind m);
std::vector<std::string> input_columns(ModelKind m);  // without the _d/_out split
std::string csv_header(ModelKind m);

std::string format_number(double v);
std::string csv_row(const SimTrace& trace, const TraceRecord& r);

void export_trace(const SimTrace& trace, const std::filesystem::path& path);
SimTrace import_trace(const std::filesystem::path& path);

// Conversions between model states/inputs and trace rows.
std::vector<double> trace_state(const FixedWingState& x);
std::vector<double> trace_state(const SimplifiedState& x);
std::vector<double> trace_state(const QuadState& x);
std::vector<double> trace_input(const FixedWingInput& u);
std::vector<double> trace_input(const SimplifiedInput& u);
std::vector<double> trace_input(const QuadInput& u);

}  // namespace guardrails::sim
