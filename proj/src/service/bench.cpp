#include "guardrails/service/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <numeric>

#include "guardrails/service/protocol.hpp"
#include "guardrails/sim/harness.hpp"

namespace guardrails::service {

BenchResult run_bench(const sim::ScenarioConfig& cfg_in, int ticks) {
  if (ticks < 1) throw ConfigError("bench needs at least one tick");
  sim::ScenarioConfig cfg = cfg_in;
  const int available = rollout_steps(cfg.duration, cfg.sim_dt) + 1;
  if (available < ticks) {
    cfg.duration = cfg.sim_dt * (ticks - 1);
    if (!cfg.pilot.phases.empty() && cfg.pilot.phases.back().end < cfg.duration)
      cfg.pilot.phases.back().end = cfg.duration;
  }
  sim::Runner runner(cfg);
  std::vector<double> ms;
  ms.reserve(ticks);
  std::size_t sink = 0;
  for (int i = 0; i < ticks && !runner.finished(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    const sim::TraceRecord* rec = runner.tick();
    if (rec) sink += telemetry_frame(cfg.model, runner.trace().constraint_names, *rec).size();
    const auto t1 = std::chrono::steady_clock::now();
    ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  if (runner.aborted()) throw std::runtime_error("bench scenario aborted: " + runner.abort_reason());
  (void)sink;

  BenchResult r;
  r.scenario = cfg.name;
  r.ticks = static_cast<int>(ms.size());
  r.sim_dt = cfg.sim_dt;
  if (cfg.model == sim::ModelKind::quadrotor) {
    r.horizon = cfg.quad_backup.horizon;
    r.rollout_dt = cfg.quad_backup.rollout_dt;
  } else {
    r.horizon = cfg.fw_backup.horizon;
    r.rollout_dt = cfg.fw_backup.rollout_dt;
  }
  r.mean_ms = std::accumulate(ms.begin(), ms.end(), 0.0) / ms.size();
  std::sort(ms.begin(), ms.end());
  auto pct = [&](double q) {
    const auto idx = static_cast<std::size_t>(std::ceil(q * ms.size())) - 1;
    return ms[std::min(idx, ms.size() - 1)];
  };
  r.p50_ms = pct(0.50);
  r.p99_ms = pct(0.99);
  r.max_ms = ms.back();
  return r;
}

std::string render_bench(const BenchResult& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "bench %s: %d ticks, sim_dt %.3g s, rollout %.3g s / %.3g s\n"
                "  per tick (filter + integrate + serialize): p50 %.3f ms, p99 %.3f ms, max %.3f ms, mean %.3f ms\n"
                "  budget sim_dt/2 = %.3f ms: %s\n",
                r.scenario.c_str(), r.ticks, r.sim_dt, r.horizon, r.rollout_dt, r.p50_ms, r.p99_ms, r.max_ms,
                r.mean_ms, 500.0 * r.sim_dt, r.p99_ms < 500.0 * r.sim_dt ? "within" : "EXCEEDED");
  return buf;
}

}  // namespace guardrails::service
