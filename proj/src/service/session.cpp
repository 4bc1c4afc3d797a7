#include "guardrails/service/session.hpp"

#include <cstdlib>
#include <fstream>

#include "guardrails/sim/config.hpp"
#include "guardrails/sim/pilot.hpp"

namespace guardrails::service {

std::optional<std::filesystem::path> log_dir_from_env() {
  const char* v = std::getenv("RTA_LOG_DIR");
  if (!v || !*v) return std::nullopt;
  return std::filesystem::path(v);
}

Session::Session(std::string id, SessionOptions opts) : id_(std::move(id)), opts_(std::move(opts)) {}

Session::~Session() {
  try {
    archive();
  } catch (...) {
  }
}

void Session::start(const std::string& scenario) {
  sim::ScenarioConfig cfg = sim::resolve_scenario(scenario);
  if (cfg.model == sim::ModelKind::quadrotor)
    throw ConfigError("scenario '" + scenario + "' uses the quadrotor, which has no live stick mapping");
  sim::apply_overrides(cfg, opts_.overrides);
  archive();
  runner_.emplace(std::move(cfg));
  scenario_ = scenario;
  paused_ = false;
  events_.clear();
  ring_.clear();
}

void Session::reset() {
  if (!runner_) return;
  archive();
  sim::ScenarioConfig cfg = runner_->config();
  runner_.emplace(std::move(cfg));
  events_.clear();
  ring_.clear();
}

void Session::set_input(double uP_d, double uz_d) {
  if (!std::isfinite(uP_d) || !std::isfinite(uz_d)) throw std::invalid_argument("stick input must be finite");
  const double t = time();
  if (!events_.empty() && events_.back().t == t)
    events_.back() = {t, uP_d, uz_d};
  else
    events_.push_back({t, uP_d, uz_d});
}

const sim::TraceRecord* Session::tick() {
  if (!running()) return nullptr;
  FixedWingInput u{0.0, 1.0};
  if (!events_.empty()) u = sim::decayed_input(events_.back(), time(), runner_->config().pilot.stale);
  const sim::TraceRecord* rec = runner_->tick(u);
  if (!rec) return nullptr;
  dirty_ = true;
  ring_.push_back(*rec);
  while (ring_.size() > opts_.ring_capacity) ring_.pop_front();
  return rec;
}

double Session::sim_dt() const { return runner_ ? runner_->config().sim_dt : 0.02; }

const sim::ScenarioConfig& Session::config() const {
  if (!runner_) throw std::logic_error("session not started");
  return runner_->config();
}

const sim::SimTrace& Session::trace() const {
  if (!runner_) throw std::logic_error("session not started");
  return runner_->trace();
}

sim::ScenarioConfig Session::replay_config() const {
  sim::ScenarioConfig cfg = config();
  cfg.name = cfg.name + "_replay";
  cfg.pilot.name = "replay";
  cfg.pilot.replay = events_;
  const auto& recs = trace().records;
  if (recs.size() >= 2) cfg.duration = recs.back().t;
  return cfg;
}

std::optional<std::filesystem::path> Session::archive() {
  if (!opts_.log_dir || !runner_ || !dirty_) return std::nullopt;
  dirty_ = false;
  const std::string stem = id_ + "-" + std::to_string(archived_++);
  const auto csv = *opts_.log_dir / (stem + ".csv");
  sim::export_trace(trace(), csv);
  std::ofstream yaml(*opts_.log_dir / (stem + ".yaml"));
  if (!yaml) throw std::runtime_error("cannot write " + (*opts_.log_dir / (stem + ".yaml")).string());
  yaml << sim::dump_scenario(replay_config());
  return csv;
}

}  // namespace guardrails::service
