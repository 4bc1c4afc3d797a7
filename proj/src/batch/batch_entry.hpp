#pragma once

#include "guardrails/batch.hpp"

#define GUARDRAILS_DECLARE_BATCH_ENTRY(ns)                                                                   \
  namespace guardrails::batch::ns {                                                                          \
  void lanes_into(int* n);                                                                                             \
  void implicit_h_fw(const FixedWingState* xs, std::size_t n, const FixedWingPolicyShape& s,                 \
                     const FixedWingParams& p, double* out);                                                 \
  void implicit_h_simple(const SimplifiedState* xs, std::size_t n, const FixedWingPolicyShape& s,            \
                         const FixedWingParams& p, double* out);                                             \
  void simulate_fw(const FixedWingState* xs, const Adversary* pilots, std::size_t n,                         \
                   const FixedWingPolicyShape& s, const FixedWingParams& p, const SimConfig& cfg,            \
                   SimResult* out);                                                                          \
  void simulate_simple(const SimplifiedState* xs, const Adversary* pilots, std::size_t n,                    \
                       const FixedWingPolicyShape& s, const FixedWingParams& p, const SimConfig& cfg,        \
                       SimResult* out);                                                                      \
  }

GUARDRAILS_DECLARE_BATCH_ENTRY(arch_scalar)
GUARDRAILS_DECLARE_BATCH_ENTRY(arch_sse2)
GUARDRAILS_DECLARE_BATCH_ENTRY(arch_avx2)
