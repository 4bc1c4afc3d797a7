#define GUARDRAILS_ARCH_NS arch_avx2
#define GUARDRAILS_BATCH_NS arch_avx2
#define GUARDRAILS_BATCH_REAL std::experimental::native_simd<double>
#include "batch_kernels.inc"
