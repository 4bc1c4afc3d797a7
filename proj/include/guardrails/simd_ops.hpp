#pragma once

// Arithmetic primitives shared by the scalar kernels (R = double) and the
// batch kernels (R = std::experimental::simd<double, Abi>). Each batch TU
// defines GUARDRAILS_ARCH_NS so its instantiations never merge with the
// baseline ones at link time.

#include <algorithm>
#include <cmath>
#include <experimental/simd>

#ifndef GUARDRAILS_ARCH_NS
#define GUARDRAILS_ARCH_NS arch_base
#endif

namespace guardrails::kernels {
namespace stdx = std::experimental;
inline namespace GUARDRAILS_ARCH_NS {

inline double select(bool m, double a, double b) { return m ? a : b; }

template <class Abi>
stdx::simd<double, Abi> select(const stdx::simd_mask<double, Abi>& m,
                               const stdx::simd<double, Abi>& a,
                               const stdx::simd<double, Abi>& b) {
  stdx::simd<double, Abi> r = b;
  stdx::where(m, r) = a;
  return r;
}

inline double vmin(double a, double b) { return b < a ? b : a; }
inline double vmax(double a, double b) { return a < b ? b : a; }

template <class Abi>
stdx::simd<double, Abi> vmin(const stdx::simd<double, Abi>& a, const stdx::simd<double, Abi>& b) {
  return select(b < a, b, a);
}
template <class Abi>
stdx::simd<double, Abi> vmax(const stdx::simd<double, Abi>& a, const stdx::simd<double, Abi>& b) {
  return select(a < b, b, a);
}

template <class R>
R vclamp(const R& x, double lo, double hi) {
  return vmin(vmax(x, R(lo)), R(hi));
}

inline double vabs(double x) { return std::fabs(x); }
template <class Abi>
stdx::simd<double, Abi> vabs(const stdx::simd<double, Abi>& x) { return stdx::abs(x); }

inline double vfloor(double x) { return std::floor(x); }
template <class Abi>
stdx::simd<double, Abi> vfloor(const stdx::simd<double, Abi>& x) { return stdx::floor(x); }

inline double vceil(double x) { return std::ceil(x); }
template <class Abi>
stdx::simd<double, Abi> vceil(const stdx::simd<double, Abi>& x) { return stdx::ceil(x); }

inline double vsqrt(double x) { return std::sqrt(x); }
template <class Abi>
stdx::simd<double, Abi> vsqrt(const stdx::simd<double, Abi>& x) { return stdx::sqrt(x); }

inline double vexp(double x) { return std::exp(x); }
template <class Abi>
stdx::simd<double, Abi> vexp(const stdx::simd<double, Abi>& x) { return stdx::exp(x); }

inline double vsin(double x) { return std::sin(x); }
inline double vcos(double x) { return std::cos(x); }
template <class Abi>
stdx::simd<double, Abi> vsin(const stdx::simd<double, Abi>& x) { return stdx::sin(x); }
template <class Abi>
stdx::simd<double, Abi> vcos(const stdx::simd<double, Abi>& x) { return stdx::cos(x); }

inline bool vfinite(double x) { return std::isfinite(x); }
template <class Abi>
stdx::simd_mask<double, Abi> vfinite(const stdx::simd<double, Abi>& x) { return stdx::isfinite(x); }

inline bool any_of(bool m) { return m; }
template <class Abi>
bool any_of(const stdx::simd_mask<double, Abi>& m) { return stdx::any_of(m); }

// (-pi, pi]; values already in range are returned unchanged.
template <class R>
R wrap_pi(const R& a) {
  constexpr double two_pi = 2.0 * 3.14159265358979323846;
  return a - two_pi * vceil((a - 3.14159265358979323846) / two_pi);
}

// [-pi/2, 3pi/2): window for the remaining heading change of a turn.
template <class R>
R wrap_turn_window(const R& a) {
  constexpr double two_pi = 2.0 * 3.14159265358979323846;
  constexpr double half_pi = 0.5 * 3.14159265358979323846;
  return a - two_pi * vfloor((a + half_pi) / two_pi);
}

}  // namespace GUARDRAILS_ARCH_NS
}  // namespace guardrails::kernels
