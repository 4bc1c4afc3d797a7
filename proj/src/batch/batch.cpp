#include <cstdio>
#include <cstdlib>

#include "batch_entry.hpp"

namespace guardrails::batch {

std::string to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::sse2: return "sse2";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

Isa isa_from_string(const std::string& s) {
  for (Isa i : {Isa::scalar, Isa::sse2, Isa::avx2})
    if (to_string(i) == s) return i;
  throw ConfigError("unknown ISA '" + s + "'");
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::sse2:
#if defined(__x86_64__)
      return true;
#else
      return false;
#endif
    case Isa::avx2:
#if defined(__x86_64__) && defined(GUARDRAILS_HAVE_AVX2_TU)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

std::vector<Isa> supported_isas() {
  std::vector<Isa> out;
  for (Isa i : {Isa::scalar, Isa::sse2, Isa::avx2})
    if (isa_supported(i)) out.push_back(i);
  return out;
}

Isa active_isa() {
  static const Isa chosen = [] {
    const Isa widest = supported_isas().back();
    if (const char* env = std::getenv("GUARDRAILS_ISA")) {
      // called from default arguments, so never throw here
      try {
        const Isa want = isa_from_string(env);
        if (isa_supported(want)) return want;
      } catch (const ConfigError&) {
      }
      std::fprintf(stderr, "GUARDRAILS_ISA=%s unavailable, using %s\n", env, to_string(widest).c_str());
    }
    return widest;
  }();
  return chosen;
}

namespace {

void require(Isa isa) {
  if (!isa_supported(isa)) throw std::runtime_error("batch ISA '" + to_string(isa) + "' not supported here");
}

void require_sizes(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("batch::simulate: one adversary per state required");
}

}  // namespace

#if defined(GUARDRAILS_HAVE_AVX2_TU)
#define GUARDRAILS_DISPATCH(isa, fn, ...)                       \
  switch (isa) {                                                \
    case Isa::scalar: arch_scalar::fn(__VA_ARGS__); break;      \
    case Isa::sse2: arch_sse2::fn(__VA_ARGS__); break;          \
    case Isa::avx2: arch_avx2::fn(__VA_ARGS__); break;          \
  }
#else
#define GUARDRAILS_DISPATCH(isa, fn, ...)                       \
  switch (isa) {                                                \
    case Isa::scalar: arch_scalar::fn(__VA_ARGS__); break;      \
    case Isa::sse2: arch_sse2::fn(__VA_ARGS__); break;          \
    case Isa::avx2: break;                                      \
  }
#endif

int lane_count(Isa isa) {
  require(isa);
  int n = 1;
  GUARDRAILS_DISPATCH(isa, lanes_into, &n);
  return n;
}

std::vector<double> implicit_h(std::span<const FixedWingState> xs, const FixedWingPolicyShape& s,
                               const FixedWingParams& p, Isa isa) {
  require(isa);
  std::vector<double> out(xs.size());
  if (xs.empty()) return out;
  GUARDRAILS_DISPATCH(isa, implicit_h_fw, xs.data(), xs.size(), s, p, out.data());
  return out;
}

std::vector<double> implicit_h(std::span<const SimplifiedState> xs, const FixedWingPolicyShape& s,
                               const FixedWingParams& p, Isa isa) {
  require(isa);
  std::vector<double> out(xs.size());
  if (xs.empty()) return out;
  GUARDRAILS_DISPATCH(isa, implicit_h_simple, xs.data(), xs.size(), s, p, out.data());
  return out;
}

std::vector<SimResult> simulate(std::span<const FixedWingState> xs, std::span<const Adversary> pilots,
                                const FixedWingPolicyShape& s, const FixedWingParams& p, const SimConfig& cfg,
                                Isa isa) {
  require(isa);
  require_sizes(xs.size(), pilots.size());
  std::vector<SimResult> out(xs.size());
  if (xs.empty()) return out;
  GUARDRAILS_DISPATCH(isa, simulate_fw, xs.data(), pilots.data(), xs.size(), s, p, cfg, out.data());
  return out;
}

std::vector<SimResult> simulate(std::span<const SimplifiedState> xs, std::span<const Adversary> pilots,
                                const FixedWingPolicyShape& s, const FixedWingParams& p, const SimConfig& cfg,
                                Isa isa) {
  require(isa);
  require_sizes(xs.size(), pilots.size());
  std::vector<SimResult> out(xs.size());
  if (xs.empty()) return out;
  GUARDRAILS_DISPATCH(isa, simulate_simple, xs.data(), pilots.data(), xs.size(), s, p, cfg, out.data());
  return out;
}

}  // namespace guardrails::batch
