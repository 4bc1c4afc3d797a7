#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "guardrails/kernels.hpp"

namespace guardrails {

FixedWingState fixed_wing_deriv(const FixedWingState& x, const FixedWingInput& u, const FixedWingParams& p);
SimplifiedState simplified_deriv(const SimplifiedState& x, double u_z, const FixedWingParams& p);
QuadState quad_deriv(const QuadState& x, const QuadInput& u, const QuadParams& p);

void normalize_state(double&);
void normalize_state(FixedWingState& x);
void normalize_state(SimplifiedState& x);
void normalize_state(QuadState& x);

// Classical RK4 with the input held over the step, then re-wrap / renormalize.
template <class State, class Input, class DerivFn>
State integrate_step(DerivFn&& deriv_fn, const State& x, const Input& u, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("integrate_step: dt must be positive");
  State next = kernels::rk4([&](const State& s) { return deriv_fn(s, u); }, x, dt);
  normalize_state(next);
  return next;
}

struct FixedWingModel {
  using State = FixedWingState;
  using Input = FixedWingInput;
  using Params = FixedWingParams;
  static constexpr const char* name = "fixed_wing";
  static constexpr bool has_heading = true;

  static State deriv(const State& x, const Input& u, const Params& p) { return fixed_wing_deriv(x, u, p); }
  static void check_domain(const State& x);
  static double heading(const State& x) { return x.psi; }
  static Input trim_input() { return {}; }
};

struct SimplifiedModel {
  using State = SimplifiedState;
  using Input = SimplifiedInput;
  using Params = FixedWingParams;
  static constexpr const char* name = "simplified";
  static constexpr bool has_heading = false;

  static State deriv(const State& x, const Input& u, const Params& p) { return simplified_deriv(x, u.u_z, p); }
  static void check_domain(const State& x);
  static double heading(const State&) { return 0.0; }
  static Input trim_input() { return {}; }
};

struct QuadModel {
  using State = QuadState;
  using Input = QuadInput;
  using Params = QuadParams;
  static constexpr const char* name = "quadrotor";
  static constexpr bool has_heading = false;

  static State deriv(const State& x, const Input& u, const Params& p) { return quad_deriv(x, u, p); }
  static void check_domain(const State& x);
  static double heading(const State&) { return 0.0; }
};

template <class Model>
typename Model::State model_step(const typename Model::State& x, const typename Model::Input& u,
                                 const typename Model::Params& p, double dt) {
  return integrate_step([&p](const auto& s, const auto& uu) { return Model::deriv(s, uu, p); }, x, u, dt);
}

template <class State>
struct RolloutResult {
  std::vector<double> times;
  std::vector<State> states;

  const State& terminal_state() const { return states.back(); }
};

// Number of steps for horizon T at step dt; throws unless T/dt is an integer.
int rollout_steps(double T, double dt);

// Calls visit(k, t_k, x_k) for k = 0..n; returns the terminal state.
// Throws ModelDomainError when a sample leaves the model's domain.
template <class Model, class Controller, class Visit>
typename Model::State rollout_visit(const typename Model::State& x0, Controller&& k_b,
                                    const typename Model::Params& p, double T, double dt, Visit&& visit) {
  const int n = rollout_steps(T, dt);
  const double h = T / n;
  typename Model::State x = x0;
  Model::check_domain(x);
  visit(0, 0.0, x);
  for (int i = 1; i <= n; ++i) {
    try {
      x = model_step<Model>(x, k_b(x), p, h);
      Model::check_domain(x);
    } catch (const ModelDomainError& e) {
      throw ModelDomainError(std::string(e.what()) + " at rollout t=" + std::to_string(i == n ? T : i * h));
    } catch (const SingularityError& e) {
      throw ModelDomainError(std::string(e.what()) + " at rollout t=" + std::to_string(i == n ? T : i * h));
    }
    visit(i, i == n ? T : i * h, x);
  }
  return x;
}

template <class Model, class Controller>
RolloutResult<typename Model::State> rollout(const typename Model::State& x0, Controller&& k_b,
                                             const typename Model::Params& p, double T, double dt) {
  RolloutResult<typename Model::State> r;
  const int n = rollout_steps(T, dt);
  r.times.reserve(n + 1);
  r.states.reserve(n + 1);
  rollout_visit<Model>(x0, k_b, p, T, dt, [&r](int, double t, const auto& x) {
    r.times.push_back(t);
    r.states.push_back(x);
  });
  return r;
}

}  // namespace guardrails
