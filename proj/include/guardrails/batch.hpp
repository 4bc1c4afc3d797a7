#pragma once

// Batched evaluation over many independent states. Every ISA variant runs
// the same kernel templates as the scalar library; the scalar variant is the
// reference the SIMD ones are tested against.

#include <span>
#include <string>
#include <vector>

#include "guardrails/policy.hpp"

namespace guardrails::batch {

enum class Isa { scalar, sse2, avx2 };

std::string to_string(Isa isa);
Isa isa_from_string(const std::string& s);
bool isa_supported(Isa isa);
std::vector<Isa> supported_isas();
// Widest supported ISA, unless GUARDRAILS_ISA names another supported one.
Isa active_isa();
int lane_count(Isa isa);

// Adversarial desired command, held per state: bank target (rad) and u_z (g).
struct Adversary {
  double bank = 0.0;
  double u_z = 1.0;
};

struct SimConfig {
  double duration = 120.0;
  double dt = 0.01;
  bool blended = true;  // false runs the pure backup with the engage-now direction
  BlendConfig blend;
  double K_phi_pilot = 3.0;
  Saturation sat_P{-kPi / 2.0, kPi / 2.0};
  Saturation sat_z{-3.0, 9.0};
  double nz_min = -kInf;  // post-blend load clamp
  double nz_max = kInf;
};

struct SimResult {
  double min_h = kInf;           // combined h over the run, normalized
  double max_lambda = 0.0;
  double terminal_backup = kInf; // h_b at the end, pure-backup runs
  bool domain_exit = false;
};

std::vector<double> implicit_h(std::span<const FixedWingState> xs, const FixedWingPolicyShape& s,
                               const FixedWingParams& p, Isa isa = active_isa());
std::vector<double> implicit_h(std::span<const SimplifiedState> xs, const FixedWingPolicyShape& s,
                               const FixedWingParams& p, Isa isa = active_isa());

std::vector<SimResult> simulate(std::span<const FixedWingState> xs, std::span<const Adversary> pilots,
                                const FixedWingPolicyShape& s, const FixedWingParams& p, const SimConfig& cfg,
                                Isa isa = active_isa());
std::vector<SimResult> simulate(std::span<const SimplifiedState> xs, std::span<const Adversary> pilots,
                                const FixedWingPolicyShape& s, const FixedWingParams& p, const SimConfig& cfg,
                                Isa isa = active_isa());

}  // namespace guardrails::batch
