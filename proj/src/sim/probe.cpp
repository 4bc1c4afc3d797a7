#include "guardrails/sim/probe.hpp"

#include <algorithm>
#include <cstdio>
#include <random>

namespace guardrails::sim {

namespace {

struct Envelope {
  double H_lo = 0.0, H_hi = 0.0;
  bool fence = false;
  Eigen::Vector2d point = Eigen::Vector2d::Zero();
  Eigen::Vector2d normal = Eigen::Vector2d(1.0, 0.0);
  double depth = 3000.0;  // m inside the fence
};

Envelope envelope_of(const ScenarioConfig& cfg) {
  Envelope e;
  const double H0 = cfg.model == ModelKind::simplified ? cfg.simple_x0.H : cfg.fw_x0.H;
  double floor = -kInf, ceiling = kInf;
  for (const auto& c : cfg.safety.constraints) {
    if (c.kind == ConstraintKind::alt_floor) floor = std::max(floor, c.limit);
    if (c.kind == ConstraintKind::alt_ceiling) ceiling = std::min(ceiling, c.limit);
    if (c.kind == ConstraintKind::geofence && !e.fence) {
      e.fence = true;
      e.point = c.point;
      e.normal = c.normal;
    }
  }
  e.H_lo = std::isfinite(floor) ? floor : H0 - 600.0;
  e.H_hi = std::isfinite(ceiling) ? ceiling : std::max(e.H_lo, H0) + 600.0;
  return e;
}

FixedWingState draw_fw(std::mt19937_64& rng, const Envelope& e, const FixedWingState& x0) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto u = [&](double a, double b) { return a + (b - a) * U(rng); };
  FixedWingState x;
  x.phi = u(-deg_to_rad(60.0), deg_to_rad(60.0));
  x.theta = u(-deg_to_rad(8.0), deg_to_rad(8.0));
  x.psi = kernels::wrap_pi(u(-kPi, kPi));
  x.H = u(e.H_lo, e.H_hi);
  x.P = u(-0.3, 0.3);
  x.N_z = u(0.5, 3.0);
  if (e.fence) {
    const Eigen::Vector2d tangent(-e.normal(1), e.normal(0));
    const Eigen::Vector2d p = e.point + u(0.0, e.depth) * e.normal + u(-5000.0, 5000.0) * tangent;
    x.p_n = p(0);
    x.p_e = p(1);
  } else {
    x.p_n = x0.p_n + u(-5000.0, 5000.0);
    x.p_e = x0.p_e + u(-5000.0, 5000.0);
  }
  return x;
}

SimplifiedState draw_simple(std::mt19937_64& rng, const Envelope& e) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto u = [&](double a, double b) { return a + (b - a) * U(rng); };
  SimplifiedState x;
  x.H = u(e.H_lo, e.H_hi);
  x.theta = u(-deg_to_rad(8.0), deg_to_rad(8.0));
  x.N_z = u(0.5, 3.0);
  return x;
}

std::vector<double> as_vector(const FixedWingState& x) {
  return {x.phi, x.theta, x.psi, x.p_n, x.p_e, x.H, x.P, x.N_z};
}
std::vector<double> as_vector(const SimplifiedState& x) { return {x.H, x.theta, x.N_z}; }

bool nonneg(double h) { return h >= 0.0; }

template <class State, class Draw>
void run_probe(ProbeReport& r, const ScenarioConfig& cfg, const ProbeConfig& pc, Draw draw) {
  const FixedWingPolicyShape shape = resolve_policy_shape(cfg.safety, cfg.fw_backup);
  FixedWingPolicyShape fine = shape;
  fine.rollout_dt = shape.rollout_dt / pc.fine_factor;

  batch::SimConfig sc;
  sc.blended = false;
  sc.dt = cfg.sim_dt;
  sc.duration = pc.horizon_factor * shape.horizon;
  sc.sat_P = shape.turn.sat_P;
  sc.sat_z = shape.turn.sat_z;

  const std::size_t chunk = 256;
  const int max_draws = std::max(pc.samples * 50, 1000);
  std::mt19937_64 rng(pc.seed);
  while (r.accepted < pc.samples && r.drawn < max_draws) {
    std::vector<State> xs;
    for (std::size_t i = 0; i < chunk; ++i) xs.push_back(draw(rng));
    const auto h = batch::implicit_h(std::span<const State>(xs), shape, cfg.fw, pc.isa);
    const auto hf = batch::implicit_h(std::span<const State>(xs), fine, cfg.fw, pc.isa);

    std::vector<State> keep;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < xs.size() && r.drawn < max_draws; ++i) {
      ++r.drawn;
      if (nonneg(h[i]) == nonneg(hf[i])) {
        ++r.sign_agreements;
      } else {
        const double band = std::min(std::fabs(h[i]), std::fabs(hf[i]));
        r.max_disagreement_abs_h = std::max(r.max_disagreement_abs_h, band);
        if (band >= 2.0 * r.tol_inv) ++r.sign_disagreements_outside_band;
      }
      if (h[i] >= pc.margin0 && r.accepted + static_cast<int>(keep.size()) < pc.samples) {
        keep.push_back(xs[i]);
        idx.push_back(i);
      }
    }
    if (keep.empty()) continue;
    const std::vector<batch::Adversary> none(keep.size());
    const auto sims = batch::simulate(std::span<const State>(keep), std::span<const batch::Adversary>(none), shape,
                                      cfg.fw, sc, pc.isa);
    for (std::size_t j = 0; j < keep.size(); ++j) {
      ProbeSample s;
      s.state = as_vector(keep[j]);
      s.h_I = h[idx[j]];
      s.h_I_fine = hf[idx[j]];
      s.min_h = sims[j].min_h;
      s.terminal_backup = sims[j].terminal_backup;
      s.violation = sims[j].domain_exit || s.min_h < -r.tol_inv || s.terminal_backup < -r.tol_inv;
      r.worst_min_h = std::min(r.worst_min_h, s.min_h);
      r.worst_terminal_backup = std::min(r.worst_terminal_backup, s.terminal_backup);
      if (s.violation) ++r.violations;
      r.samples.push_back(std::move(s));
      ++r.accepted;
    }
  }
}

}  // namespace

bool ProbeReport::pass() const {
  return accepted == requested && violations == 0 && sign_agreement() >= 0.99 && sign_disagreements_outside_band == 0;
}

double normalized_tol_inv(const ScenarioConfig& cfg, double dt) {
  double rate = 0.0;
  for (const auto& c : cfg.safety.constraints) {
    if (!c.in_min()) continue;
    if (c.kind == ConstraintKind::geofence && c.measure == GeofenceMeasure::ttc)
      rate = std::max(rate, 1.0);
    else
      rate = std::max(rate, cfg.fw.V_T / c.scale);
  }
  return 2.0 * rate * dt;
}

ProbeReport invariance_probe(const ScenarioConfig& cfg, const ProbeConfig& pc) {
  cfg.validate();
  if (pc.samples < 1) throw ConfigError("probe needs at least one sample");
  if (pc.margin0 < 0.0) throw ConfigError("probe margin0 must be non-negative (got " + std::to_string(pc.margin0) + ")");
  if (pc.fine_factor < 1 || !(pc.horizon_factor > 0.0)) throw ConfigError("probe fine_factor/horizon_factor out of range");
  if (cfg.model == ModelKind::quadrotor) throw ConfigError("the invariance probe covers fixed-wing and simplified scenarios");

  ProbeReport r;
  r.scenario = cfg.name;
  r.requested = pc.samples;
  r.tol_inv = normalized_tol_inv(cfg, cfg.sim_dt);
  const Envelope env = envelope_of(cfg);
  if (cfg.model == ModelKind::fixed_wing)
    run_probe<FixedWingState>(r, cfg, pc, [&](std::mt19937_64& rng) { return draw_fw(rng, env, cfg.fw_x0); });
  else
    run_probe<SimplifiedState>(r, cfg, pc, [&](std::mt19937_64& rng) { return draw_simple(rng, env); });
  return r;
}

std::string render_probe(const ProbeReport& r) {
  char buf[1024];
  std::snprintf(buf, sizeof buf,
                "probe %s: accepted %d/%d (drawn %d), violations %d, tol_inv %.4g\n"
                "  worst min h %.6g, worst terminal h_b %.6g\n"
                "  fine-step sign agreement %.4f (%d/%d), disagreements outside 2*tol_inv: %d (max |h| %.3g)\n"
                "  %s\n",
                r.scenario.c_str(), r.accepted, r.requested, r.drawn, r.violations, r.tol_inv, r.worst_min_h,
                r.worst_terminal_backup, r.sign_agreement(), r.sign_agreements, r.drawn,
                r.sign_disagreements_outside_band, r.max_disagreement_abs_h, r.pass() ? "PASS" : "FAIL");
  return buf;
}

}  // namespace guardrails::sim
