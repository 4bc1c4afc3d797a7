#pragma once

#include <cstddef>
#include <tuple>
#include <type_traits>
#include <utility>

#include <Eigen/Dense>

#include "guardrails/common.hpp"

namespace guardrails {

// State and input records are templated on the scalar so the batch kernels
// can run the same model code on SIMD lanes. fields() exposes the members in
// declaration order for the generic RK4 and blending arithmetic.

template <class R>
struct FixedWingStateT {
  R phi{0.0};
  R theta{0.0};
  R psi{0.0};
  R p_n{0.0};
  R p_e{0.0};
  R H{0.0};
  R P{0.0};
  R N_z{1.0};

  auto fields() { return std::tie(phi, theta, psi, p_n, p_e, H, P, N_z); }
  auto fields() const { return std::tie(phi, theta, psi, p_n, p_e, H, P, N_z); }
};

template <class R>
struct FixedWingInputT {
  R u_P{0.0};
  R u_z{1.0};

  auto fields() { return std::tie(u_P, u_z); }
  auto fields() const { return std::tie(u_P, u_z); }
};

template <class R>
struct SimplifiedStateT {
  R H{0.0};
  R theta{0.0};
  R N_z{1.0};

  auto fields() { return std::tie(H, theta, N_z); }
  auto fields() const { return std::tie(H, theta, N_z); }
};

template <class R>
struct SimplifiedInputT {
  R u_z{1.0};

  auto fields() { return std::tie(u_z); }
  auto fields() const { return std::tie(u_z); }
};

using FixedWingState = FixedWingStateT<double>;
using FixedWingInput = FixedWingInputT<double>;
using SimplifiedState = SimplifiedStateT<double>;
using SimplifiedInput = SimplifiedInputT<double>;

struct FixedWingParams {
  double V_T = 150.0;
  double g = kStandardGravity;
  double tau_P = 0.3;
  double tau_z = 0.5;

  void validate() const;
};

struct QuadState {
  Eigen::Vector3d p = Eigen::Vector3d::Zero();
  Eigen::Vector4d q = Eigen::Vector4d(1.0, 0.0, 0.0, 0.0);  // w, x, y, z
  Eigen::Vector3d v = Eigen::Vector3d::Zero();
  Eigen::Vector3d omega = Eigen::Vector3d::Zero();

  Eigen::Quaterniond quat() const { return Eigen::Quaterniond(q(0), q(1), q(2), q(3)); }
  void set_quat(const Eigen::Quaterniond& qq) { q << qq.w(), qq.x(), qq.y(), qq.z(); }

  auto fields() { return std::tie(p, q, v, omega); }
  auto fields() const { return std::tie(p, q, v, omega); }
};

struct QuadInput {
  double tau = 0.0;  // collective thrust (N)
  Eigen::Vector3d M = Eigen::Vector3d::Zero();

  auto fields() { return std::tie(tau, M); }
  auto fields() const { return std::tie(tau, M); }
};

struct QuadParams {
  double m = 1.0;
  Eigen::Matrix3d J = Eigen::Vector3d(0.01, 0.01, 0.018).asDiagonal();
  double g = kStandardGravity;

  void validate() const;
};

namespace detail {

template <class T>
constexpr std::size_t field_count = std::tuple_size_v<decltype(std::declval<T&>().fields())>;

template <std::size_t I, class F, class... Args>
decltype(auto) apply_at(F& f, const Args&... args) {
  return f(std::get<I>(args.fields())...);
}

template <class S, class F, std::size_t... I, class... Args>
S zip_impl(std::index_sequence<I...>, F& f, const S& first, const Args&... rest) {
  S out = first;
  auto o = out.fields();
  ((std::get<I>(o) = apply_at<I>(f, first, rest...)), ...);
  return out;
}

}  // namespace detail

// out.field_i = f(args.field_i...) for every field.
template <class S, class F, class... Args>
S zip_fields(F&& f, const S& first, const Args&... rest) {
  if constexpr (std::is_arithmetic_v<S>)
    return f(first, rest...);
  else
    return detail::zip_impl(std::make_index_sequence<detail::field_count<S>>{}, f, first, rest...);
}

template <class S, class F>
void for_each_field(const S& s, F&& f) {
  std::apply([&](const auto&... fs) { (f(fs), ...); }, s.fields());
}

}  // namespace guardrails
