#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "guardrails/batch.hpp"
#include "guardrails/sim/scenario.hpp"

namespace guardrails::sim {

struct ProbeConfig {
  int samples = 500;
  std::uint64_t seed = 7;
  double margin0 = 0.0;          // accept states with h_I >= margin0 (normalized units)
  double horizon_factor = 2.0;   // pure-backup run of horizon_factor * T
  int fine_factor = 10;          // fine-step re-check at rollout_dt / fine_factor
  batch::Isa isa = batch::active_isa();
};

struct ProbeSample {
  std::vector<double> state;
  double h_I = 0.0;
  double h_I_fine = 0.0;
  double min_h = 0.0;
  double terminal_backup = 0.0;
  bool violation = false;
};

struct ProbeReport {
  std::string scenario;
  int requested = 0;
  int accepted = 0;
  int drawn = 0;
  int violations = 0;
  double tol_inv = 0.0;  // normalized units of h
  double worst_min_h = kInf;
  double worst_terminal_backup = kInf;
  int sign_agreements = 0;
  int sign_disagreements_outside_band = 0;
  double max_disagreement_abs_h = 0.0;
  std::vector<ProbeSample> samples;

  // Over every drawn state, accepted or not.
  double sign_agreement() const { return drawn ? double(sign_agreements) / drawn : 1.0; }
  bool pass() const;
};

// Samples states around the scenario's operating envelope with h_I >= margin0,
// runs the pure backup closed loop and checks h and h_b against tol_inv.
ProbeReport invariance_probe(const ScenarioConfig& cfg, const ProbeConfig& pc);

// tol_inv on the normalized h for fixed-wing/simplified scenarios at dt.
double normalized_tol_inv(const ScenarioConfig& cfg, double dt);

std::string render_probe(const ProbeReport& r);

}  // namespace guardrails::sim
