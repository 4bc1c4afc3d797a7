// Acceptance run: one PASS/FAIL line per primary criterion, exit 1 on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "guardrails/service/bench.hpp"
#include "guardrails/sim/builtin.hpp"
#include "guardrails/sim/harness.hpp"
#include "guardrails/sim/probe.hpp"

using namespace guardrails;
using namespace guardrails::sim;
namespace fs = std::filesystem;

namespace {

// pinned tolerances
constexpr double kLoadMin = 0.2, kLoadMax = 4.0;
constexpr double kNzOvershoot = 0.3;           // g
constexpr double kLoadRuntime = 5.0;           // s
constexpr double kAltTolCapFt = 50.0;
constexpr double kAltRuntime = 10.0;           // s
constexpr double kAuthorityLambda = 0.05;
constexpr double kAuthorityWindow = 10.0;      // s after turn-away
constexpr double kParallelDeg = 10.0;
constexpr double kParallelHold = 20.0;         // s
constexpr int kProbeSamples = 500;
constexpr double kSignAgreement = 0.99;
constexpr int kAlgebraN = 10000;
constexpr double kP99BudgetMs = 10.0;

int failures = 0;

void line(bool ok, const std::string& name, const std::string& detail) {
  std::printf("%s %-22s %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... a) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

ScenarioConfig builtin(const std::string& name) { return find_builtin(name).value(); }

struct Timed {
  ScenarioResult r;
  double seconds;
};

Timed timed_run(const ScenarioConfig& c) {
  const auto t0 = std::chrono::steady_clock::now();
  auto r = run_scenario(c);
  return {std::move(r), std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()};
}

const ConstraintSummary* summary_of(const SafetyReport& r, ConstraintKind kind) {
  for (const auto& c : r.constraints)
    if (c.kind == to_string(kind)) return &c;
  return nullptr;
}

// Load channel: commanded u_z inside [lo, hi] exactly, measured N_z within the overshoot band.
struct LoadCheck {
  double cmd_lo = kInf, cmd_hi = -kInf, nz_lo = kInf, nz_hi = -kInf;
  bool ok() const {
    return cmd_lo >= kLoadMin && cmd_hi <= kLoadMax && nz_lo >= kLoadMin - kNzOvershoot &&
           nz_hi <= kLoadMax + kNzOvershoot;
  }
  std::string str() const { return fmt("u_z_out [%.17g, %.17g] g, N_z [%.4f, %.4f] g", cmd_lo, cmd_hi, nz_lo, nz_hi); }
};

LoadCheck load_check(const SimTrace& t) {
  LoadCheck c;
  const std::size_t nz = t.model == ModelKind::fixed_wing ? 7 : 2;
  for (const auto& r : t.records) {
    c.cmd_lo = std::min(c.cmd_lo, r.u_out.back());
    c.cmd_hi = std::max(c.cmd_hi, r.u_out.back());
    c.nz_lo = std::min(c.nz_lo, r.state[nz]);
    c.nz_hi = std::max(c.nz_hi, r.state[nz]);
  }
  return c;
}

bool constraint_ok(const SafetyReport& r, ConstraintKind kind, std::string& detail) {
  const auto* s = summary_of(r, kind);
  if (!s) {
    detail += fmt(" %s missing;", to_string(kind).c_str());
    return false;
  }
  detail += fmt(" %s min %.4g >= -%.4g;", s->name.c_str(), s->min_raw, s->tol_inv_raw);
  return s->pass;
}

// Longest run at the end of the trace with ground track parallel to the fence.
double final_parallel_seconds(const ScenarioConfig& cfg, const SimTrace& t) {
  const auto& f = *std::find_if(cfg.safety.constraints.begin(), cfg.safety.constraints.end(),
                                [](const ConstraintSpec& c) { return c.kind == ConstraintKind::geofence; });
  const double along = std::atan2(f.normal.x(), -f.normal.y());  // fence tangent heading
  double run = 0.0;
  for (const auto& r : t.records) {
    const double d = std::fabs(std::remainder(r.state[2] - along, kPi));  // either direction
    run = d < deg_to_rad(kParallelDeg) ? run + cfg.sim_dt : 0.0;
  }
  return run;
}

void load_limiting() {
  const auto cfg = builtin("g_limit_assault");
  const auto [r, sec] = timed_run(cfg);
  const auto lc = load_check(r.trace);
  line(lc.ok() && sec < kLoadRuntime, "load_factor_limiting", lc.str() + fmt(", runtime %.2f s", sec));
}

void altitude_limits() {
  const auto cfg = builtin("ceiling_floor_assault");
  const auto [r, sec] = timed_run(cfg);
  const double floor_ft = m_to_ft(cfg.safety.constraints[0].limit);
  const double ceil_ft = m_to_ft(cfg.safety.constraints[1].limit);
  const double tol_ft = m_to_ft(tol_inv_raw(cfg, cfg.safety.constraints[0], cfg.fw.V_T));
  double lo = kInf, hi = -kInf;
  for (const auto& rec : r.trace.records) {
    lo = std::min(lo, rec.state[0]);
    hi = std::max(hi, rec.state[0]);
  }
  // turn-away: the scripted pitch target reverses sign
  bool authority = true;
  std::string returns;
  const auto& ph = cfg.pilot.phases;
  for (std::size_t i = 1; i < ph.size(); ++i) {
    if (ph[i].law != PilotLaw::pitch_track || ph[i - 1].law != PilotLaw::pitch_track) continue;
    if (ph[i].get("pitch", 0.0) * ph[i - 1].get("pitch", 0.0) >= 0.0) continue;
    double back = kInf;
    for (const auto& rec : r.trace.records)
      if (rec.t >= ph[i].start && rec.lambda < kAuthorityLambda) {
        back = rec.t - ph[i].start;
        break;
      }
    authority = authority && back <= kAuthorityWindow;
    returns += fmt(" %.4g s@%g", back, ph[i].start);
  }
  const bool ok = lo >= floor_ft - tol_ft && hi <= ceil_ft + tol_ft && tol_ft < kAltTolCapFt &&
                  r.report.max_lambda < 1.0 && authority && !returns.empty() && sec < kAltRuntime;
  line(ok, "altitude_limits",
       fmt("H [%.2f, %.2f] ft in [%.0f, %.0f] +- %.2f ft, max lambda %.6f, lambda<0.05 after", lo, hi, floor_ft,
           ceil_ft, tol_ft, r.report.max_lambda) +
           returns + fmt(", runtime %.2f s", sec));
}

void geofence() {
  const auto cfg = builtin("geofence_assault");
  const auto r = run_scenario(cfg);
  std::string d;
  const bool safe = constraint_ok(r.report, ConstraintKind::geofence, d);
  const double par = final_parallel_seconds(cfg, r.trace);
  line(safe && par >= kParallelHold, "geofence", d + fmt(" parallel within %.0f deg for final %.2f s", kParallelDeg, par));
}

void combined() {
  const auto cfg = builtin("geofence_floor_gload");
  const auto r = run_scenario(cfg);
  std::string d;
  bool ok = constraint_ok(r.report, ConstraintKind::geofence, d);
  ok = constraint_ok(r.report, ConstraintKind::alt_floor, d) && ok;
  const auto lc = load_check(r.trace);
  ok = ok && lc.ok() && r.report.intervention_episodes >= 2;
  line(ok, "combined_constraints", d + " " + lc.str() + fmt(", episodes %d", r.report.intervention_episodes));
}

void theorem1() {
  bool all = true;
  std::string d;
  for (const auto& cfg : builtin_scenarios()) {
    if (cfg.model == ModelKind::quadrotor) continue;
    ProbeConfig pc;
    pc.samples = kProbeSamples;
    const auto p = invariance_probe(cfg, pc);
    const bool ok = p.accepted == kProbeSamples && p.violations == 0 && p.sign_agreement() >= kSignAgreement &&
                    p.sign_disagreements_outside_band == 0;
    all = all && ok;
    d += fmt(" %s %d/%d viol %d agree %.4f;", cfg.name.c_str(), p.accepted, p.requested, p.violations,
             p.sign_agreement());
  }
  line(all, "empirical_invariance", d);
}

void filter_algebra() {
  const FixedWingParams p;
  SafetySpec spec;
  spec.constraints = {make_geofence_ttc("geofence", {3000.0, 0.0}, {-1.0, 0.0}),
                      make_alt_floor("alt_floor", 4000.0, p.V_T), make_alt_ceiling("alt_ceiling", 9000.0, p.V_T),
                      make_load_min("load_min", kLoadMin), make_load_max("load_max", kLoadMax)};
  const auto shape = resolve_policy_shape(spec, FixedWingBackupConfig{});
  const auto right = make_fixed_wing_policy(shape, p, TurnDirection::right);
  const auto left = make_fixed_wing_policy(shape, p, TurnDirection::left);
  const InputLimits<FixedWingInput> lim{{-kPi / 2.0, -3.0}, {kPi / 2.0, 9.0}};
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0), unit(0.0, 1.0);
  auto state = [&] {
    FixedWingState x;
    x.phi = 1.0 * u(rng);
    x.theta = 0.3 * u(rng);
    x.psi = kPi * u(rng);
    x.p_n = -12000.0 + 15000.0 * unit(rng);  // reaches far-inside states where lambda is negligible
    x.p_e = 2000.0 * u(rng);
    x.H = 6500.0 + 2500.0 * u(rng);
    x.P = 0.5 * u(rng);
    x.N_z = 1.5 + 1.5 * u(rng);
    return x;
  };

  int hI_bad = 0, lambda_bad = 0, box_bad = 0, auth_bad = 0, auth_n = 0;
  for (int i = 0; i < kAlgebraN; ++i) {
    const auto x = state();
    const auto& pol = choose_turn_direction(x, shape.fence) == TurnDirection::right ? right : left;
    if (implicit_h<FixedWingModel>(x, pol, spec, p).h_I > combine(spec, x, p).h) ++hI_bad;

    double h1 = 100.0 * u(rng), h2 = 100.0 * u(rng);
    if (h1 > h2) std::swap(h1, h2);
    const BlendConfig b{0.1 + 10.0 * unit(rng)};
    const double l1 = blend_lambda(h1, b), l2 = blend_lambda(h2, b);
    if (!(l1 >= 0.0 && l1 <= 1.0 && l2 >= 0.0 && l2 <= 1.0 && l1 >= l2)) ++lambda_bad;

    auto in_box = [&](const FixedWingInput& v) {
      return v.u_P >= lim.lo.u_P && v.u_P <= lim.hi.u_P && v.u_z >= lim.lo.u_z && v.u_z <= lim.hi.u_z;
    };
    auto draw = [&] {
      return FixedWingInput{lim.lo.u_P + (lim.hi.u_P - lim.lo.u_P) * unit(rng),
                            lim.lo.u_z + (lim.hi.u_z - lim.lo.u_z) * unit(rng)};
    };
    if (!in_box(blend_inputs(draw(), draw(), unit(rng)))) ++box_bad;

    const FixedWingInput u_d{3.0 * u(rng), 3.5 + 8.5 * u(rng)};
    const auto dec = blended_filter<FixedWingModel>(x, 0.0, u_d, pol, spec, BlendConfig{1.0}, lim, p);
    if (dec.lambda < kPilotAuthorityLambda) {
      ++auth_n;
      auto c = clamp_input(u_d, lim);
      apply_load_limits(c, spec);
      if (dec.u_out.u_P != c.u_P || dec.u_out.u_z != c.u_z) ++auth_bad;
    }
  }
  const bool ok = hI_bad == 0 && lambda_bad == 0 && box_bad == 0 && auth_bad == 0 && auth_n > 0;
  line(ok, "filter_algebra",
       fmt("n=%d: h_I>h %d, lambda range/monotone %d, box escapes %d, clamp(u_d) mismatches %d of %d", kAlgebraN,
           hI_bad, lambda_bad, box_bad, auth_bad, auth_n));
}

void quadrotor() {
  const auto cfg = builtin("quad_geofence");
  const auto r = run_scenario(cfg);
  std::string d;
  bool ok = true;
  for (const auto& s : r.report.constraints) {
    d += fmt(" %s min %.4g >= -%.4g;", s.name.c_str(), s.min_raw, s.tol_inv_raw);
    ok = ok && s.pass;
  }
  const auto& st = r.trace.records.back().state;
  const double v = std::sqrt(st[7] * st[7] + st[8] * st[8] + st[9] * st[9]);
  const double eps = cfg.quad_backup.params.epsilon;
  ok = ok && v < eps;
  line(ok, "quadrotor_box", d + fmt(" terminal |v| %.3g < %.3g m/s", v, eps));
}

void determinism() {
  const auto dir = fs::temp_directory_path() / "guardrails_acceptance";
  fs::create_directories(dir);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  int same = 0, total = 0;
  std::string diff;
  for (const auto& cfg : builtin_scenarios()) {
    ++total;
    export_trace(run_scenario(cfg).trace, dir / "a.csv");
    export_trace(run_scenario(cfg).trace, dir / "b.csv");
    if (slurp(dir / "a.csv") == slurp(dir / "b.csv"))
      ++same;
    else
      diff += " " + cfg.name;
  }
  fs::remove_all(dir);
  line(same == total, "determinism", fmt("%d/%d built-ins byte-identical", same, total) + diff);
}

void realtime() {
  const auto b = service::run_bench(builtin("geofence_assault"), 3000);
  line(b.p99_ms < kP99BudgetMs, "realtime_budget",
       fmt("p50 %.3f ms p99 %.3f ms (budget %.0f ms), rollout %.0f s / %.2f s", b.p50_ms, b.p99_ms, kP99BudgetMs,
           b.horizon, b.rollout_dt));
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> checks = {load_limiting, altitude_limits, geofence,    combined,
                                                     theorem1,      filter_algebra,  quadrotor,   determinism,
                                                     realtime};
  for (const auto& c : checks) {
    try {
      c();
    } catch (const std::exception& e) {
      line(false, "exception", e.what());
    }
  }
  std::printf("%s: %d failing\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
