#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "ldg/projections.hpp"
#include "ldg/semidiscrete.hpp"
#include "ldg/timestep.hpp"

using namespace ldg;

namespace {

// u' = lambda u + s(t) on a one-coefficient field.
struct StubOp {
  double lambda = 0.0;
  std::function<double(double)> s = [](double) { return 0.0; };
  void rhs(const DGField& u, double t, DGField& out) const {
    for (std::size_t n = 0; n < u.size(); ++n) out.data()[n] = lambda * u.data()[n] + s(t);
  }
};

DGField scalar(double v) {
  DGField f(1, 1, 0);
  f(0, 0, 0) = v;
  return f;
}

}  // namespace

TEST(Timestep, ZeroOperatorLeavesStateUnchanged) {
  DGField u(3, 2, 2);
  for (std::size_t n = 0; n < u.size(); ++n) u.data()[n] = std::sin(1.0 + n);
  const DGField v = ssp_rk3_step(StubOp{}, u, 0.3, 0.01);
  EXPECT_EQ(v.data(), u.data());
}

TEST(Timestep, CubicTaylorPolynomial) {
  for (double z : {-0.5, -0.1, 0.2, 1.0}) {
    StubOp op;
    op.lambda = z / 0.1;
    const double got = ssp_rk3_step(op, scalar(1.0), 0.0, 0.1)(0, 0, 0);
    EXPECT_NEAR(got, 1 + z + z * z / 2 + z * z * z / 6, 1e-15);
  }
}

TEST(Timestep, StageTimesIntegrateQuadraticsExactly) {
  StubOp op;
  op.s = [](double t) { return t * t; };
  const double t0 = 0.7, dt = 0.2;
  const double got = ssp_rk3_step(op, scalar(0.0), t0, dt)(0, 0, 0);
  EXPECT_NEAR(got, (std::pow(t0 + dt, 3) - std::pow(t0, 3)) / 3, 1e-15);
}

TEST(Timestep, ClippingOnlyWhenNeeded) {
  StubOp op;
  op.s = [](double) { return 1.0; };
  TimeControl tc;
  tc.t_end = 1.0;
  tc.dt_override = 0.25;
  auto r = integrate(op, scalar(0.0), tc, 1.0);
  EXPECT_EQ(r.steps, 4u);
  EXPECT_FALSE(r.clipped);
  EXPECT_EQ(r.t, 1.0);
  EXPECT_NEAR(r.u(0, 0, 0), 1.0, 1e-15);
  tc.dt_override = 0.3;
  std::vector<double> times;
  r = integrate(op, scalar(0.0), tc, 1.0, [&](std::size_t, double t, const DGField&) { times.push_back(t); });
  EXPECT_EQ(r.steps, 4u);
  EXPECT_TRUE(r.clipped);
  EXPECT_EQ(r.t, 1.0);
  ASSERT_EQ(times.size(), 4u);
  EXPECT_DOUBLE_EQ(times[2], 0.9);
  EXPECT_NEAR(r.u(0, 0, 0), 1.0, 1e-14);
  // dt from the parabolic rule
  tc.dt_override.reset();
  tc.cfl = 0.5;
  r = integrate(op, scalar(0.0), tc, 0.2);
  EXPECT_EQ(r.steps, 50u);
  EXPECT_FALSE(r.clipped);
}

TEST(Timestep, BlowUpIsReported) {
  StubOp op;
  op.s = [](double t) { return t > 0.25 ? std::numeric_limits<double>::quiet_NaN() : 0.0; };
  TimeControl tc;
  tc.t_end = 1.0;
  tc.dt_override = 0.1;
  try {
    integrate(op, scalar(1.0), tc, 1.0);
    FAIL() << "expected blow-up";
  } catch (const BlowUpError& e) {
    EXPECT_GE(e.time(), 0.25);
    EXPECT_LT(e.time(), 0.45);
  }
  EXPECT_THROW(ssp_rk3_step(op, scalar(1.0), 0.0, 0.0), InputError);
  tc.t_end = -1.0;
  EXPECT_THROW(integrate(op, scalar(1.0), tc, 1.0), InputError);
}

TEST(Timestep, TemporalOrderOnExampleOne) {
  const auto p = builtin("ex1_cubic");
  const auto part = build_uniform(0.0, 2 * std::numbers::pi, 10, true);
  const SemiDiscreteOp op(p, part, 2, FluxConfig{});
  const DGField u0 = l2_project(p.initial, part, 2);
  auto run = [&](double dt) {
    TimeControl tc;
    tc.t_end = 0.1;
    tc.dt_override = dt;
    return integrate(op, u0, tc).u;
  };
  const DGField ref = run(6.25e-5);
  std::vector<double> e;
  for (double dt : {2e-3, 1e-3, 5e-4}) {
    DGField d = run(dt);
    axpy(-1.0, ref, d);
    e.push_back(l2_norm_modal(d, part));
  }
  EXPECT_GT(std::log2(e[0] / e[1]), 2.8);
  EXPECT_GT(std::log2(e[1] / e[2]), 2.8);
}

TEST(Timestep, StableAtTableCflAndDeterministic) {
  const auto p = builtin("ex1_cubic");
  const auto part = build_uniform(0.0, 2 * std::numbers::pi, 20, true);
  const SemiDiscreteOp op(p, part, 1, FluxConfig{});
  const DGField u0 = l2_project(p.initial, part, 1);
  TimeControl tc;
  tc.cfl = 0.005;
  tc.t_end = 1.0;
  const double n0 = l2_norm_modal(u0, part);
  double worst = 0.0;
  const auto a = integrate(op, u0, tc, [&](std::size_t, double, const DGField& u) {
    worst = std::max(worst, l2_norm_modal(u, part));
  });
  EXPECT_LE(worst, 2 * n0);
  const auto b = integrate(op, u0, tc);
  EXPECT_EQ(a.u.data(), b.u.data());
  EXPECT_EQ(a.steps, b.steps);
}
