#pragma once

#include <random>

#include "guardrails/sim/scenario.hpp"

namespace guardrails::sim {

// Stick input held for input_timeout, then faded linearly to trim over decay_time.
// Ages are measured on the sim clock.
FixedWingInput decayed_input(const ReplayEvent& latest, double t, const StaleInputPolicy& stale);

class Pilot {
public:
  explicit Pilot(const ScenarioConfig& cfg);

  FixedWingInput command(const FixedWingState& x, double t);
  SimplifiedInput command(const SimplifiedState& x, double t);
  QuadInput command(const QuadState& x, double t);

private:
  const PilotPhase* phase_at(double t);
  FixedWingInput replay_at(double t) const;
  double noise(double sigma);

  const ScenarioConfig& cfg_;
  std::size_t cursor_ = 0;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace guardrails::sim
