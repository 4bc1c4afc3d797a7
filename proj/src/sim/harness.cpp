#include "guardrails/sim/harness.hpp"

#include <algorithm>

#include "guardrails/sim/pilot.hpp"

namespace guardrails::sim {

namespace {

template <class Model>
struct Adapter;

template <>
struct Adapter<FixedWingModel> {
  const ScenarioConfig& cfg;
  FixedWingPolicyShape shape;

  explicit Adapter(const ScenarioConfig& c) : cfg(c), shape(resolve_policy_shape(c.safety, c.fw_backup)) {}
  FixedWingState x0() const { return cfg.fw_x0; }
  const FixedWingParams& params() const { return cfg.fw; }
  const InputLimits<FixedWingInput>& limits() const { return cfg.fw_limits; }
  BackupPolicy<FixedWingModel> policy(const FixedWingState& x, const Episode& e, TurnDirection& dir) const {
    dir = policy_direction(shape, e, x);
    return make_fixed_wing_policy(shape, cfg.fw, dir);
  }
};

template <>
struct Adapter<SimplifiedModel> {
  const ScenarioConfig& cfg;
  FixedWingPolicyShape shape;
  BackupPolicy<SimplifiedModel> fixed;

  explicit Adapter(const ScenarioConfig& c)
      : cfg(c), shape(resolve_policy_shape(c.safety, c.fw_backup)), fixed(make_simplified_policy(shape, c.fw)) {}
  SimplifiedState x0() const { return cfg.simple_x0; }
  const FixedWingParams& params() const { return cfg.fw; }
  const InputLimits<SimplifiedInput>& limits() const { return cfg.simple_limits; }
  const BackupPolicy<SimplifiedModel>& policy(const SimplifiedState&, const Episode&, TurnDirection& dir) const {
    dir = TurnDirection::right;
    return fixed;
  }
};

template <>
struct Adapter<QuadModel> {
  const ScenarioConfig& cfg;
  BackupPolicy<QuadModel> fixed;

  explicit Adapter(const ScenarioConfig& c) : cfg(c), fixed(make_quad_policy(c.quad_backup, c.quad)) {}
  QuadState x0() const { return cfg.quad_x0; }
  const QuadParams& params() const { return cfg.quad; }
  const InputLimits<QuadInput>& limits() const { return cfg.quad_limits; }
  const BackupPolicy<QuadModel>& policy(const QuadState&, const Episode&, TurnDirection& dir) const {
    dir = TurnDirection::right;
    return fixed;
  }
};

ModelKind kind_of(FixedWingModel) { return ModelKind::fixed_wing; }
ModelKind kind_of(SimplifiedModel) { return ModelKind::simplified; }
ModelKind kind_of(QuadModel) { return ModelKind::quadrotor; }

struct Engine {
  virtual ~Engine() = default;
  virtual const TraceRecord* tick(const std::optional<FixedWingInput>& u_d) = 0;
};

SimplifiedInput live_input(const FixedWingInput& u, SimplifiedInput*) { return {u.u_z}; }
FixedWingInput live_input(const FixedWingInput& u, FixedWingInput*) { return u; }
QuadInput live_input(const FixedWingInput&, QuadInput*) {
  throw ConfigError("live stick input does not apply to the quadrotor");
}

template <class Model>
struct ModelEngine final : Engine {
  using State = typename Model::State;
  using Input = typename Model::Input;

  const ScenarioConfig& cfg;
  SimTrace& trace;
  int& k;
  bool& finished;
  std::string& abort_reason;
  Adapter<Model> ad;
  Pilot pilot;
  State x;
  Episode episode;
  int n;

  ModelEngine(const ScenarioConfig& c, SimTrace& tr, int& kk, bool& fin, std::string& why)
      : cfg(c), trace(tr), k(kk), finished(fin), abort_reason(why), ad(c), pilot(c), x(ad.x0()),
        n(rollout_steps(c.duration, c.sim_dt)) {
    trace.model = kind_of(Model{});
    for (const auto& con : cfg.safety.constraints) trace.constraint_names.push_back(con.name);
  }

  const TraceRecord* tick(const std::optional<FixedWingInput>& live) override {
    if (finished) return nullptr;
    const double t = k * cfg.sim_dt;
    try {
      const Input u_d = live ? live_input(*live, static_cast<Input*>(nullptr)) : pilot.command(x, t);
      TurnDirection dir;
      const auto& policy = ad.policy(x, episode, dir);
      const auto d = blended_filter<Model>(x, t, u_d, policy, cfg.safety, cfg.blend, ad.limits(), ad.params());
      episode.update(d.lambda, dir, t);

      TraceRecord rec;
      rec.t = t;
      rec.state = trace_state(x);
      rec.u_d = trace_input(u_d);
      rec.u_out = trace_input(d.u_out);
      rec.lambda = d.lambda;
      rec.h_I = d.h_I;
      rec.h_min = d.h_now;
      rec.active_constraint = d.active_constraint;
      for (const auto& c : cfg.safety.constraints) {
        rec.h_values.push_back(eval_constraint(c, x, ad.params()));
        rec.raw_values.push_back(raw_constraint(c, x, ad.params()));
      }
      trace.records.push_back(std::move(rec));
      if (k == n) {
        finished = true;
      } else {
        x = model_step<Model>(x, d.u_out, ad.params(), cfg.sim_dt);
        Model::check_domain(x);
      }
      ++k;
      return &trace.records.back();
    } catch (const std::exception& e) {
      abort_reason = std::string(e.what()) + " (t=" + format_number(t) + ")";
      finished = true;
      return nullptr;
    }
  }
};

double input_violation(const std::vector<double>& u, const std::vector<double>& lo, const std::vector<double>& hi) {
  double worst = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) worst = std::max({worst, lo[i] - u[i], u[i] - hi[i]});
  return worst;
}

}  // namespace

struct Runner::Impl {
  ScenarioConfig cfg;
  SimTrace trace;
  int k = 0;
  bool finished = false;
  std::string abort_reason;
  std::unique_ptr<Engine> engine;
};

Runner::Runner(ScenarioConfig cfg) : impl_(std::make_unique<Impl>()) {
  cfg.validate();
  auto& m = *impl_;
  m.cfg = std::move(cfg);
  switch (m.cfg.model) {
    case ModelKind::fixed_wing:
      m.engine = std::make_unique<ModelEngine<FixedWingModel>>(m.cfg, m.trace, m.k, m.finished, m.abort_reason);
      break;
    case ModelKind::simplified:
      m.engine = std::make_unique<ModelEngine<SimplifiedModel>>(m.cfg, m.trace, m.k, m.finished, m.abort_reason);
      break;
    case ModelKind::quadrotor:
      m.engine = std::make_unique<ModelEngine<QuadModel>>(m.cfg, m.trace, m.k, m.finished, m.abort_reason);
      break;
  }
}

Runner::~Runner() = default;
Runner::Runner(Runner&&) noexcept = default;
Runner& Runner::operator=(Runner&&) noexcept = default;

const ScenarioConfig& Runner::config() const { return impl_->cfg; }
int Runner::tick_index() const { return impl_->k; }
double Runner::time() const { return impl_->k * impl_->cfg.sim_dt; }
bool Runner::finished() const { return impl_->finished; }
bool Runner::aborted() const { return !impl_->abort_reason.empty(); }
const std::string& Runner::abort_reason() const { return impl_->abort_reason; }
const TraceRecord* Runner::tick(const std::optional<FixedWingInput>& u_d) { return impl_->engine->tick(u_d); }
const SimTrace& Runner::trace() const { return impl_->trace; }
SimTrace Runner::take_trace() { return std::move(impl_->trace); }

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
  Runner r(cfg);
  while (!r.finished()) r.tick();
  ScenarioResult res;
  res.report = summarize(r.config(), r.trace());
  if (r.aborted()) {
    res.report.aborted = true;
    res.report.abort_reason = r.abort_reason();
    res.report.pass = false;
  }
  res.trace = r.take_trace();
  return res;
}

double tol_inv_raw(const ScenarioConfig& cfg, const ConstraintSpec& c, double v_max) {
  switch (c.kind) {
    case ConstraintKind::alt_floor:
    case ConstraintKind::alt_ceiling:
    case ConstraintKind::geofence: return 2.0 * 1.0 * v_max * cfg.sim_dt;
    case ConstraintKind::box_axis: return 2.0 * (2.0 * c.half_length) * v_max * cfg.sim_dt;
    case ConstraintKind::load_min:
    case ConstraintKind::load_max: return 0.0;
  }
  return 0.0;
}

SafetyReport summarize(const ScenarioConfig& cfg, const SimTrace& trace) {
  SafetyReport r;
  r.scenario = cfg.name;
  r.model = cfg.model;
  r.duration = cfg.duration;
  r.sim_dt = cfg.sim_dt;

  double v_max = cfg.fw.V_T;
  if (cfg.model == ModelKind::quadrotor) {
    v_max = 0.0;
    for (const auto& rec : trace.records)
      v_max = std::max(v_max, Eigen::Vector3d(rec.state[7], rec.state[8], rec.state[9]).norm());
  }

  std::vector<double> lo, hi;
  if (cfg.model == ModelKind::fixed_wing) {
    lo = trace_input(cfg.fw_limits.lo);
    hi = trace_input(cfg.fw_limits.hi);
  } else if (cfg.model == ModelKind::simplified) {
    lo = trace_input(cfg.simple_limits.lo);
    hi = trace_input(cfg.simple_limits.hi);
  } else {
    lo = trace_input(cfg.quad_limits.lo);
    hi = trace_input(cfg.quad_limits.hi);
  }
  if (cfg.model != ModelKind::quadrotor) {
    const std::size_t uz = lo.size() - 1;
    for (const auto& c : cfg.safety.constraints) {
      if (c.kind == ConstraintKind::load_min) lo[uz] = std::max(lo[uz], c.limit);
      if (c.kind == ConstraintKind::load_max) hi[uz] = std::min(hi[uz], c.limit);
    }
  }

  for (std::size_t i = 0; i < cfg.safety.constraints.size(); ++i) {
    const auto& c = cfg.safety.constraints[i];
    ConstraintSummary s;
    s.name = c.name;
    s.kind = to_string(c.kind);
    s.in_min = c.in_min();
    s.tol_inv_raw = tol_inv_raw(cfg, c, v_max);
    for (const auto& rec : trace.records) {
      if (i < rec.h_values.size()) s.min_h = std::min(s.min_h, rec.h_values[i]);
      if (i < rec.raw_values.size()) s.min_raw = std::min(s.min_raw, rec.raw_values[i]);
    }
    s.pass = !s.in_min || s.min_raw >= -s.tol_inv_raw;
    r.constraints.push_back(s);
  }

  const std::size_t nz_col = cfg.model == ModelKind::fixed_wing ? 7 : 2;
  Episode ep;
  int busy = 0;
  for (const auto& rec : trace.records) {
    r.max_lambda = std::max(r.max_lambda, rec.lambda);
    if (rec.lambda > kEngageLambda) ++busy;
    ep.update(rec.lambda, TurnDirection::right, rec.t);
    r.min_h_I = std::min(r.min_h_I, rec.h_I);
    r.max_input_violation = std::max(r.max_input_violation, input_violation(rec.u_out, lo, hi));
    if (cfg.model != ModelKind::quadrotor) {
      r.max_nz = std::max(r.max_nz, rec.state[nz_col]);
      r.min_nz = std::min(r.min_nz, rec.state[nz_col]);
    }
  }
  r.intervention_episodes = ep.count;
  r.intervention_occupancy = trace.records.empty() ? 0.0 : double(busy) / trace.records.size();
  r.pass = r.max_input_violation == 0.0;
  for (const auto& s : r.constraints) r.pass = r.pass && s.pass;
  return r;
}

}  // namespace guardrails::sim
