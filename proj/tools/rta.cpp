// rta: scenario runs, invariance probe, benchmark and the live session server.

#include <csignal>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "guardrails/service/bench.hpp"
#include "guardrails/service/server.hpp"
#include "guardrails/sim/builtin.hpp"
#include "guardrails/sim/config.hpp"
#include "guardrails/sim/harness.hpp"
#include "guardrails/sim/probe.hpp"

using namespace guardrails;

namespace {

void add_overrides(CLI::App* app, sim::Overrides& o) {
  app->add_option("--dt", o.dt, "simulation step override (s)")->check(CLI::PositiveNumber);
  app->add_option("--beta", o.beta, "blending sharpness override (1/margin unit)")->check(CLI::PositiveNumber);
  app->add_option("--duration", o.duration, "run duration override (s)")->check(CLI::PositiveNumber);
}

sim::ScenarioConfig load(const std::string& name, const sim::Overrides& o) {
  sim::ScenarioConfig cfg = sim::resolve_scenario(name);
  sim::apply_overrides(cfg, o);
  return cfg;
}

service::Server* g_server = nullptr;

extern "C" void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Guardrails runtime assurance: backup-CBF safety filter, scenario harness and live server"};
  app.require_subcommand(1);

  sim::Overrides ov;
  std::string scenario;
  std::string out_dir = "out";

  auto* run = app.add_subcommand("run", "run a scenario and write trace.csv, summary and panel series");
  run->add_option("--scenario", scenario, "built-in name or scenario file")->required();
  run->add_option("--out", out_dir, "output directory");
  add_overrides(run, ov);

  app.add_subcommand("list-scenarios", "list built-in scenarios");

  sim::ProbeConfig pc;
  std::string isa_name;
  auto* probe = app.add_subcommand("probe-invariance", "empirical forward-invariance check of the backup policy");
  probe->add_option("--scenario", scenario, "built-in name or scenario file")->required();
  probe->add_option("--samples", pc.samples, "accepted samples")->check(CLI::PositiveNumber);
  probe->add_option("--seed", pc.seed, "sampling seed");
  probe->add_option("--margin0", pc.margin0, "accept states with h_I >= margin0");
  probe->add_option("--isa", isa_name, "batch kernel: scalar, sse2 or avx2 (default: widest supported)");
  add_overrides(probe, ov);

  int ticks = 3000;
  std::string bench_scenario = "geofence_assault";
  auto* bench = app.add_subcommand("bench", "per-tick filter + integrate + serialize timing");
  bench->add_option("--scenario", bench_scenario, "built-in name or scenario file");
  bench->add_option("--ticks", ticks, "ticks to time")->check(CLI::PositiveNumber);
  add_overrides(bench, ov);

  auto* dump = app.add_subcommand("dump-scenario", "print a scenario as a scenario file");
  dump->add_option("--scenario", scenario, "built-in name or scenario file")->required();

  service::ServerOptions so;
  auto* serve = app.add_subcommand("serve", "live websocket sessions, one aircraft per connection");
  serve->add_option("--bind", so.bind, "address:port");
  serve->add_option("--scenario", so.session.default_scenario, "scenario used by start without a name");
  serve->add_option("--threads", so.threads, "I/O threads")->check(CLI::PositiveNumber);
  serve->add_option("--dt", so.session.overrides.dt, "simulation step override (s)")->check(CLI::PositiveNumber);
  serve->add_option("--beta", so.session.overrides.beta, "blending sharpness override")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const auto cfg = load(scenario, ov);
      const auto res = sim::run_scenario(cfg);
      const std::filesystem::path dir(out_dir);
      sim::export_trace(res.trace, dir / "trace.csv");
      sim::render_report(res.report, res.trace, cfg, dir);
      std::cout << sim::render_summary(res.report);
      std::cout << "wrote " << (dir / "trace.csv").string() << "\n";
      return res.report.pass ? 0 : 3;
    }
    if (app.got_subcommand("list-scenarios")) {
      for (const auto& c : sim::builtin_scenarios())
        std::cout << c.name << "  [" << sim::to_string(c.model) << "]  " << c.description << "\n";
      return 0;
    }
    if (*probe) {
      if (!isa_name.empty()) pc.isa = batch::isa_from_string(isa_name);
      const auto cfg = load(scenario, ov);
      const auto r = sim::invariance_probe(cfg, pc);
      std::cout << sim::render_probe(r);
      return r.pass() ? 0 : 3;
    }
    if (*bench) {
      const auto cfg = load(bench_scenario, ov);
      const auto r = service::run_bench(cfg, ticks);
      std::cout << service::render_bench(r);
      return 0;
    }
    if (*dump) {
      std::cout << sim::dump_scenario(sim::resolve_scenario(scenario));
      return 0;
    }
    if (*serve) {
      so.session.log_dir = service::log_dir_from_env();
      service::Server server(so);
      const auto port = server.listen();
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cout << "rta serving on port " << port << " (default scenario " << so.session.default_scenario << ")"
                << std::endl;
      server.run();
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "rta: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
