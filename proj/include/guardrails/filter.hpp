#pragma once

#include <functional>
#include <optional>
#include <string>

#include "guardrails/backup.hpp"

namespace guardrails {

template <class State>
struct RolloutSummary {
  const State& initial;
  const State& terminal;
  double heading_change;  // unwrapped, fixed-wing only
};

template <class Model>
struct BackupPolicy {
  using State = typename Model::State;
  using Input = typename Model::Input;

  std::function<Input(const State&)> controller;
  std::function<double(const RolloutSummary<State>&)> backup_set;
  double horizon = 30.0;
  double rollout_dt = 0.02;

  void validate() const;
};

struct BlendConfig {
  double beta = 1.0;

  void validate() const;
};

template <class Input>
struct InputLimits {
  Input lo;
  Input hi;
};

// Below this lambda the output is clamp(u_d) exactly.
constexpr double kPilotAuthorityLambda = 1e-6;

template <class Input>
struct FilterDecision {
  Input u_d;
  Input u_b;
  Input u_blend;
  Input u_out;
  double lambda = 0.0;
  double h_I = kInf;
  double h_now = kInf;
  int active_index = -1;
  std::string active_constraint = "none";
  double backup_engaged_fraction = 0.0;
  bool rollout_failed = false;
};

struct ImplicitH {
  double h_I = kInf;
  double path_min = kInf;
  double terminal_backup = kInf;
  int active_index = -1;  // argmin constraint along the path, -1 for the backup set
  bool domain_exit = false;
};

double blend_lambda(double h, const BlendConfig& cfg);

// Load-factor limits from the spec, applied to the u_z channel.
void apply_load_limits(FixedWingInput& u, const SafetySpec& spec);
void apply_load_limits(SimplifiedInput& u, const SafetySpec& spec);
inline void apply_load_limits(QuadInput&, const SafetySpec&) {}

template <class Input>
Input clamp_input(const Input& u, const InputLimits<Input>& lim) {
  return zip_fields(
      [](const auto& v, const auto& lo, const auto& hi) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>)
          return std::min(std::max(v, lo), hi);
        else
          return T(v.cwiseMax(lo).cwiseMin(hi));
      },
      u, lim.lo, lim.hi);
}

template <class Input>
Input blend_inputs(const Input& u_d, const Input& u_b, double lambda) {
  return zip_fields([lambda](const auto& d, const auto& b) { return (1.0 - lambda) * d + lambda * b; }, u_d, u_b);
}

template <class Model>
ImplicitH implicit_h_visit(const typename Model::State& x, const BackupPolicy<Model>& policy, const SafetySpec& spec,
                           const typename Model::Params& p, RolloutResult<typename Model::State>* record) {
  using State = typename Model::State;
  ImplicitH out;
  if (!spec.has_min_terms()) return out;
  double dpsi = 0.0;
  double prev_psi = Model::heading(x);
  try {
    const State xT = rollout_visit<Model>(
        x, policy.controller, p, policy.horizon, policy.rollout_dt, [&](int, double t, const State& s) {
          const Combined c = combine(spec, s, p);
          if (c.h < out.path_min) {
            out.path_min = c.h;
            out.active_index = c.active;
          }
          if constexpr (Model::has_heading) {
            const double psi = Model::heading(s);
            dpsi += kernels::wrap_pi(psi - prev_psi);
            prev_psi = psi;
          }
          if (record) {
            record->times.push_back(t);
            record->states.push_back(s);
          }
        });
    out.terminal_backup = policy.backup_set(RolloutSummary<State>{x, xT, dpsi});
  } catch (const ModelDomainError&) {
    out.domain_exit = true;
    out.h_I = kDomainExitSentinel;
    return out;
  }
  out.h_I = out.path_min;
  if (out.terminal_backup < out.h_I) {
    out.h_I = out.terminal_backup;
    out.active_index = -1;
  }
  return out;
}

template <class Model>
ImplicitH implicit_h(const typename Model::State& x, const BackupPolicy<Model>& policy, const SafetySpec& spec,
                     const typename Model::Params& p) {
  return implicit_h_visit<Model>(x, policy, spec, p, nullptr);
}

template <class Model>
std::pair<ImplicitH, RolloutResult<typename Model::State>> implicit_h_with_rollout(
    const typename Model::State& x, const BackupPolicy<Model>& policy, const SafetySpec& spec,
    const typename Model::Params& p) {
  RolloutResult<typename Model::State> r;
  const ImplicitH h = implicit_h_visit<Model>(x, policy, spec, p, &r);
  return {h, std::move(r)};
}

template <class Model>
FilterDecision<typename Model::Input> blended_filter(const typename Model::State& x, double /*t*/,
                                                     const typename Model::Input& u_d,
                                                     const BackupPolicy<Model>& policy, const SafetySpec& spec,
                                                     const BlendConfig& cfg,
                                                     const InputLimits<typename Model::Input>& limits,
                                                     const typename Model::Params& p) {
  using Input = typename Model::Input;
  FilterDecision<Input> d;
  d.u_d = u_d;
  const Combined now = combine(spec, x, p);
  d.h_now = now.h;
  const ImplicitH ih = implicit_h<Model>(x, policy, spec, p);
  d.h_I = ih.h_I;
  d.rollout_failed = ih.domain_exit;
  d.active_index = ih.domain_exit ? now.active : ih.active_index;
  if (!spec.has_min_terms())
    d.active_constraint = "none";
  else if (d.active_index < 0)
    d.active_constraint = "backup_set";
  else
    d.active_constraint = spec.constraints[d.active_index].name;
  d.lambda = blend_lambda(d.h_I, cfg);
  d.backup_engaged_fraction = d.lambda;
  d.u_b = policy.controller(x);
  d.u_blend = blend_inputs(u_d, d.u_b, d.lambda);
  d.u_out = clamp_input(d.lambda < kPilotAuthorityLambda ? u_d : d.u_blend, limits);
  apply_load_limits(d.u_out, spec);
  return d;
}

template <class Model, class DesiredFn>
  requires std::invocable<DesiredFn, const typename Model::State&, double>
FilterDecision<typename Model::Input> blended_filter(const typename Model::State& x, double t, DesiredFn&& k_d,
                                                     const BackupPolicy<Model>& policy, const SafetySpec& spec,
                                                     const BlendConfig& cfg,
                                                     const InputLimits<typename Model::Input>& limits,
                                                     const typename Model::Params& p) {
  return blended_filter<Model>(x, t, k_d(x, t), policy, spec, cfg, limits, p);
}

}  // namespace guardrails
