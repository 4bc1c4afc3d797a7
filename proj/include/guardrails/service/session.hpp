#pragma once

#include <deque>
#include <filesystem>
#include <optional>
#include <string>

#include "guardrails/sim/harness.hpp"

namespace guardrails::service {

struct SessionOptions {
  std::string default_scenario = "geofence_assault_live";
  sim::Overrides overrides;
  std::size_t ring_capacity = 512;
  std::optional<std::filesystem::path> log_dir;  // RTA_LOG_DIR
};

// Reads RTA_LOG_DIR.
std::optional<std::filesystem::path> log_dir_from_env();

// One simulated aircraft flown from live stick input. Single owner; the
// server serializes message handling and ticks on a per-connection strand.
class Session {
public:
  Session(std::string id, SessionOptions opts);
  ~Session();
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  const std::string& id() const { return id_; }
  const SessionOptions& options() const { return opts_; }

  // (Re)initializes from a built-in name or file; throws ConfigError.
  void start(const std::string& scenario);
  void reset();
  void pause() { paused_ = true; }
  void resume() { paused_ = false; }

  bool started() const { return runner_.has_value(); }
  bool paused() const { return paused_; }
  bool finished() const { return runner_ && runner_->finished(); }
  bool running() const { return started() && !paused_ && !finished(); }

  // Stamped at the next tick's sim time.
  void set_input(double uP_d, double uz_d);

  // Advances one tick; null when not running.
  const sim::TraceRecord* tick();

  double time() const { return runner_ ? runner_->time() : 0.0; }
  double sim_dt() const;
  const sim::ScenarioConfig& config() const;
  const sim::SimTrace& trace() const;
  const std::deque<sim::TraceRecord>& ring() const { return ring_; }
  const std::vector<sim::ReplayEvent>& events() const { return events_; }

  // The scenario with the recorded stick events as a replay pilot; running it
  // through the harness reproduces this session's trace.
  sim::ScenarioConfig replay_config() const;

  // Writes <id>-<n>.csv (trace) and <id>-<n>.yaml (replay scenario) into the
  // log dir, if configured and anything was flown. Returns the CSV path.
  std::optional<std::filesystem::path> archive();

private:
  std::string id_;
  SessionOptions opts_;
  std::string scenario_;
  std::optional<sim::Runner> runner_;
  bool paused_ = false;
  std::vector<sim::ReplayEvent> events_;
  std::deque<sim::TraceRecord> ring_;
  int archived_ = 0;
  bool dirty_ = false;
};

}  // namespace guardrails::service
