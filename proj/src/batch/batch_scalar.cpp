#define GUARDRAILS_BATCH_NS arch_scalar
#define GUARDRAILS_BATCH_REAL double
#include "batch_kernels.inc"
