#include <gtest/gtest.h>

#include <random>

#include "guardrails/backup.hpp"
#include "guardrails/dynamics.hpp"

using namespace guardrails;

namespace {

// Reference values from tools/oracles.py (mpmath, 30 digits).
constexpr double kFwGeneric[8] = {
    0.052180821682490391936, 0.021476591371008425149, 0.021844606302569929121, 107.52060896962418443,
    167.45342696889187284,   19.966683329365630461,   0.5,                     1.0};
constexpr double kFwAt5s[8] = {
    0.45344559558129291324, 0.12336950242279721372, 0.63365413870563677886, 633.27186463576301653,
    394.97069889114155729,  6065.999411445787973,   0.049999998266675444174, 1.2999954600070237515};

std::vector<double> as_vec(const FixedWingState& x) {
  return {x.phi, x.theta, x.psi, x.p_n, x.p_e, x.H, x.P, x.N_z};
}

double max_abs_diff(const FixedWingState& a, const FixedWingState& b) {
  const auto va = as_vec(a), vb = as_vec(b);
  double m = 0.0;
  for (std::size_t i = 0; i < va.size(); ++i) m = std::max(m, std::fabs(va[i] - vb[i]));
  return m;
}

FixedWingState fw_x0_oracle() { return {0.2, 0.05, 0.5, 0.0, 0.0, 6000.0, 0.02, 1.2}; }

FixedWingState fly_constant(const FixedWingState& x0, const FixedWingInput& u, double T, double dt) {
  const FixedWingParams p;
  return rollout_visit<FixedWingModel>(x0, [u](const FixedWingState&) { return u; }, p, T, dt,
                                       [](int, double, const FixedWingState&) {});
}

}  // namespace

TEST(FixedWingDeriv, LevelTrimIsEquilibrium) {
  FixedWingState x;
  x.H = 6000.0;
  const auto d = fixed_wing_deriv(x, {0.0, 1.0}, FixedWingParams{});
  EXPECT_EQ(d.phi, 0.0);
  EXPECT_EQ(d.theta, 0.0);
  EXPECT_EQ(d.psi, 0.0);
  EXPECT_DOUBLE_EQ(d.p_n, 150.0);  // position moves along the trim path
  EXPECT_EQ(d.p_e, 0.0);
  EXPECT_EQ(d.H, 0.0);
  EXPECT_EQ(d.P, 0.0);
  EXPECT_EQ(d.N_z, 0.0);
}

TEST(FixedWingDeriv, SixtyDegreeCoordinatedTurn) {
  FixedWingState x;
  x.phi = 60.0 * kPi / 180.0;
  x.N_z = 2.0;
  const FixedWingParams p;
  const auto d = fixed_wing_deriv(x, {0.0, 2.0}, p);
  EXPECT_NEAR(d.theta, 0.0, 1e-15);
  EXPECT_NEAR(d.psi, p.g / p.V_T * std::tan(x.phi), 1e-15);
  EXPECT_EQ(d.phi, 0.0);
}

TEST(FixedWingDeriv, GenericStateMatchesOracle) {
  const FixedWingState x{0.3, 0.1, 1.0, 0.0, 0.0, 6000.0, 0.05, 1.5};
  FixedWingParams p;
  p.V_T = 200.0;
  const auto d = as_vec(fixed_wing_deriv(x, {0.2, 2.0}, p));
  for (int i = 0; i < 8; ++i) EXPECT_NEAR(d[i], kFwGeneric[i], 1e-12 * std::max(1.0, std::fabs(kFwGeneric[i]))) << i;
}

TEST(FixedWingDeriv, SingularPitchThrows) {
  FixedWingState x;
  x.theta = kPi / 2.0;
  EXPECT_THROW(fixed_wing_deriv(x, {}, FixedWingParams{}), SingularityError);
  SimplifiedState s{0.0, kPi / 2.0, 1.0};
  EXPECT_THROW(simplified_deriv(s, 1.0, FixedWingParams{}), SingularityError);
}

TEST(SimplifiedDeriv, WingsLevelTrim) {
  const auto d = simplified_deriv({6000.0, 0.0, 1.0}, 1.0, FixedWingParams{});
  EXPECT_EQ(d.H, 0.0);
  EXPECT_EQ(d.theta, 0.0);
  EXPECT_EQ(d.N_z, 0.0);
}

TEST(SimplifiedDeriv, MatchesOracle) {
  const auto d = simplified_deriv({6000.0, 0.1, 2.0}, 3.0, FixedWingParams{});
  EXPECT_NEAR(d.H, 14.975012497024222846, 1e-12);
  EXPECT_NEAR(d.theta, 0.065704282683841657473, 1e-15);
  EXPECT_NEAR(d.N_z, 2.0, 1e-15);
}

TEST(SimplifiedDeriv, IsTheWingsLevelRestriction) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> th(-1.2, 1.2), nz(-2.0, 8.0), uz(-3.0, 9.0), psi(-kPi, kPi);
  const FixedWingParams p;
  for (int i = 0; i < 1000; ++i) {
    FixedWingState x;
    x.theta = th(rng);
    x.N_z = nz(rng);
    x.psi = psi(rng);
    x.H = 5000.0 + i;
    const double u = uz(rng);
    const auto f = fixed_wing_deriv(x, {0.0, u}, p);
    const auto s = simplified_deriv({x.H, x.theta, x.N_z}, u, p);
    ASSERT_EQ(f.H, s.H);
    ASSERT_EQ(f.theta, s.theta);
    ASSERT_EQ(f.N_z, s.N_z);
  }
}

TEST(QuadDeriv, Hover) {
  QuadParams p;
  QuadState x;
  const auto d = quad_deriv(x, {p.m * p.g, Eigen::Vector3d::Zero()}, p);
  EXPECT_NEAR(d.v.norm(), 0.0, 1e-15);
  EXPECT_EQ(d.omega.norm(), 0.0);
  EXPECT_EQ(d.q.norm(), 0.0);
}

TEST(QuadDeriv, FreeFall) {
  QuadParams p;
  QuadState x;
  x.set_quat(Eigen::Quaterniond(Eigen::AngleAxisd(0.7, Eigen::Vector3d(1, 2, 3).normalized())));
  const auto d = quad_deriv(x, {0.0, Eigen::Vector3d::Zero()}, p);
  EXPECT_NEAR(d.v.x(), 0.0, 1e-15);
  EXPECT_NEAR(d.v.y(), 0.0, 1e-15);
  EXPECT_NEAR(d.v.z(), -p.g, 1e-15);
}

TEST(QuadDeriv, GenericStateMatchesOracle) {
  QuadParams p;
  QuadState x;
  const double h = kPi / 12.0;
  x.q << std::cos(h), std::sin(h), 0.0, 0.0;
  x.v << 1.0, 2.0, 3.0;
  x.omega << 0.1, -0.2, 0.3;
  const auto d = quad_deriv(x, {1.2 * p.m * p.g, Eigen::Vector3d(0.01, 0.0, 0.0)}, p);
  EXPECT_TRUE(d.p.isApprox(x.v));
  const double qd[4] = {-0.012940952255126038117, 0.048296291314453414337, -0.13541543939428494303,
                        0.11900696943310816678};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(d.q(i), qd[i], 1e-15) << i;
  EXPECT_NEAR(d.v.x(), 0.0, 1e-15);
  EXPECT_NEAR(d.v.y(), -5.88399, 1e-13);
  EXPECT_NEAR(d.v.z(), 0.38471963122719830634, 1e-13);
  EXPECT_NEAR(d.omega.x(), 1.048, 1e-13);
  EXPECT_NEAR(d.omega.y(), 0.024, 1e-13);
  EXPECT_NEAR(d.omega.z(), 0.0, 1e-15);
}

TEST(IntegrateStep, ZeroDerivativeLeavesStateAlone) {
  const FixedWingState x{0.1, 0.2, 0.3, 4.0, 5.0, 6.0, 0.7, 0.8};
  const auto next = integrate_step([](const FixedWingState&, const FixedWingInput&) {
    FixedWingState z;
    z.N_z = 0.0;
    return z;
  }, x, FixedWingInput{}, 0.1);
  EXPECT_EQ(max_abs_diff(next, x), 0.0);
}

TEST(IntegrateStep, ExponentialDecayOneStep) {
  const double x1 = integrate_step([](double x, double) { return -x; }, 1.0, 0.0, 0.1);
  EXPECT_NEAR(x1, 0.90483741803595957316, 1e-7);
  EXPECT_NEAR(x1, 1.0 - 0.1 + 0.005 - 0.1 * 0.1 * 0.1 / 6.0 + 1e-4 / 24.0, 1e-15);
}

TEST(IntegrateStep, RejectsNonPositiveStep) {
  EXPECT_THROW(integrate_step([](double x, double) { return -x; }, 1.0, 0.0, 0.0), std::invalid_argument);
}

TEST(IntegrateStep, WrapsHeading) {
  FixedWingState x;
  x.psi = kPi - 1e-3;
  x.phi = 0.5;
  x.N_z = 2.0;
  const auto next = model_step<FixedWingModel>(x, {0.0, 2.0}, FixedWingParams{}, 0.1);
  EXPECT_GT(next.psi, -kPi);
  EXPECT_LT(next.psi, 0.0);
}

TEST(Rollout, FixedWingMatchesHighPrecisionSolution) {
  const auto xT = fly_constant(fw_x0_oracle(), {0.05, 1.3}, 5.0, 0.01);
  const auto v = as_vec(xT);
  for (int i = 0; i < 8; ++i) EXPECT_NEAR(v[i], kFwAt5s[i], 1e-8 * std::max(1.0, std::fabs(kFwAt5s[i]))) << i;
}

TEST(Rollout, ConvergenceOrderIsFour) {
  const FixedWingInput u{0.05, 1.3};
  const auto ref = fly_constant(fw_x0_oracle(), u, 5.0, 1e-5);
  const auto v = as_vec(ref);
  for (int i = 0; i < 8; ++i) ASSERT_NEAR(v[i], kFwAt5s[i], 1e-8 * std::max(1.0, std::fabs(kFwAt5s[i])));
  double prev = 0.0;
  for (double dt : {0.1, 0.05, 0.025}) {
    const double err = max_abs_diff(fly_constant(fw_x0_oracle(), u, 5.0, dt), ref);
    if (prev > 0.0) {
      EXPECT_GE(std::log2(prev / err), 3.8) << "dt " << dt;
    }
    prev = err;
  }
}

TEST(Rollout, SingleStepHasTwoSamples) {
  const FixedWingParams p;
  const FixedWingState x0 = fw_x0_oracle();
  const auto r = rollout<FixedWingModel>(x0, [](const FixedWingState&) { return FixedWingInput{}; }, p, 0.02, 0.02);
  ASSERT_EQ(r.times.size(), 2u);
  ASSERT_EQ(r.states.size(), 2u);
  EXPECT_EQ(r.times.front(), 0.0);
  EXPECT_EQ(r.times.back(), 0.02);
  EXPECT_EQ(max_abs_diff(r.states.front(), x0), 0.0);
}

TEST(Rollout, TimesEndExactlyAtHorizon) {
  const FixedWingParams p;
  const auto r = rollout<FixedWingModel>(FixedWingState{}, [](const FixedWingState&) { return FixedWingInput{}; }, p,
                                         30.0, 0.02);
  ASSERT_EQ(r.times.size(), 1501u);
  EXPECT_EQ(r.times.back(), 30.0);
  for (std::size_t i = 1; i < r.times.size(); ++i) ASSERT_GT(r.times[i], r.times[i - 1]);
}

TEST(Rollout, HorizonMustBeWholeSteps) {
  EXPECT_EQ(rollout_steps(30.0, 0.02), 1500);
  EXPECT_THROW(rollout_steps(1.0, 0.3), std::invalid_argument);
  EXPECT_THROW(rollout_steps(-1.0, 0.1), std::invalid_argument);
}

TEST(Rollout, DomainExitIsReported) {
  const FixedWingParams p;
  FixedWingState x;
  x.H = 6000.0;
  // full pull: theta runs through pi/2
  EXPECT_THROW(rollout<FixedWingModel>(x, [](const FixedWingState&) { return FixedWingInput{0.0, 9.0}; }, p, 60.0,
                                       0.01),
               ModelDomainError);
}

// Trim flow moves position (and heading in a turn); the remaining components
// must stay put.
TEST(Rollout, TrimInvariance) {
  const FixedWingParams p;
  for (double phi_deg : {0.0, 30.0, -45.0, 60.0}) {
    FixedWingState x0;
    x0.H = 6000.0;
    x0.phi = phi_deg * kPi / 180.0;
    x0.N_z = 1.0 / std::cos(x0.phi);
    const FixedWingInput u{0.0, x0.N_z};
    const auto r = rollout<FixedWingModel>(x0, [u](const FixedWingState&) { return u; }, p, 60.0, 0.01);
    double worst = 0.0;
    for (const auto& x : r.states)
      worst = std::max({worst, std::fabs(x.phi - x0.phi), std::fabs(x.theta - x0.theta), std::fabs(x.H - x0.H),
                        std::fabs(x.P - x0.P), std::fabs(x.N_z - x0.N_z)});
    EXPECT_LT(worst, 1e-6) << phi_deg;
    // heading rate is the equilibrium rate
    if (phi_deg == 0.0) {
      EXPECT_DOUBLE_EQ(r.terminal_state().p_n, 150.0 * 60.0);
    }
  }
  const SimplifiedState s0{6000.0, 0.0, 1.0};
  const auto rs = rollout<SimplifiedModel>(s0, [](const SimplifiedState&) { return SimplifiedInput{1.0}; }, p, 60.0,
                                           0.01);
  for (const auto& s : rs.states) ASSERT_EQ(s.H, s0.H);
}

TEST(Rollout, QuaternionStaysUnit) {
  QuadParams p;
  QuadState x0;
  x0.omega << 1.0, -2.0, 0.5;
  x0.v << 3.0, 0.0, 1.0;
  double worst = 0.0;
  rollout_visit<QuadModel>(x0, [](const QuadState&) { return QuadInput{12.0, Eigen::Vector3d(0.02, -0.01, 0.005)}; },
                           p, 10.0, 0.01, [&](int, double, const QuadState& x) {
                             worst = std::max(worst, std::fabs(x.q.norm() - 1.0));
                           });
  EXPECT_LT(worst, 1e-9);
}

TEST(Rollout, CoordinatedTurnReachesHalfTurnIn30s) {
  const FixedWingParams p;
  TurnParams tp;
  FixedWingState x0;
  x0.H = 6000.0;
  x0.psi = 0.3;
  tp.H_star = x0.H;
  tp.psi_star = x0.psi + kPi;
  auto k = [&tp](const FixedWingState& x) { return coordinated_turn_controller(x, tp); };
  auto turned = [&](double dt) {
    double dpsi = 0.0, prev = x0.psi;
    rollout_visit<FixedWingModel>(x0, k, p, 30.0, dt, [&](int, double, const FixedWingState& x) {
      dpsi += std::remainder(x.psi - prev, 2.0 * kPi);
      prev = x.psi;
    });
    return dpsi;
  };
  const double coarse = turned(0.02);
  const double fine = turned(1e-4);
  // inputs are held for one step, so coarse and fine are different closed loops: O(dt) apart
  EXPECT_NEAR(coarse, fine, 1e-3);
  // heading loop converges exponentially; about 10 deg remain at 30 s
  EXPECT_NEAR(fine, kPi, 0.2);
  EXPECT_GT(fine, 0.0);  // right turn
}

TEST(Params, Validation) {
  FixedWingParams p;
  EXPECT_NO_THROW(p.validate());
  p.tau_P = 0.0;
  EXPECT_THROW(p.validate(), ConfigError);
  QuadParams q;
  EXPECT_NO_THROW(q.validate());
  q.J(0, 1) = 0.5;
  EXPECT_THROW(q.validate(), ConfigError);
}
