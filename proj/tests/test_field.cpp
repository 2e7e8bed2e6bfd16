#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "ldg/field.hpp"

using namespace ldg;

constexpr double kPi = std::numbers::pi;

TEST(Field, EvalFromModes) {
  const auto p = build_uniform(0.0, 1.0, 3, false);
  DGField f(3, 1, 2);
  f(1, 0, 0) = 1.0;
  f(1, 0, 2) = 2.0;
  EXPECT_DOUBLE_EQ(f.eval(1, 0.0)[0], 0.0);  // 1 + 2 * (-1/2)
  EXPECT_DOUBLE_EQ(f.right_trace(1)[0], 3.0);
  EXPECT_DOUBLE_EQ(f.left_trace(1)[0], 3.0);
  EXPECT_DOUBLE_EQ(f.eval(0, 0.3)[0], 0.0);
  EXPECT_THROW(f.eval(3, 0.0), InputError);
  (void)p;
}

TEST(Field, TracesMatchEvalAtEnds) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(-1, 1);
  DGField f(4, 2, 3);
  for (double& c : f.data()) c = U(rng);
  for (std::size_t j = 0; j < 4; ++j) {
    EXPECT_NEAR((f.right_trace(j) - f.eval(j, 1.0)).norm(), 0.0, 1e-14);
    EXPECT_NEAR((f.left_trace(j) - f.eval(j, -1.0)).norm(), 0.0, 1e-14);
  }
}

TEST(Field, InterfaceTracesPeriodicAndBounded) {
  DGField f(3, 1, 1);
  for (std::size_t j = 0; j < 3; ++j) {
    f(j, 0, 0) = static_cast<double>(j);
    f(j, 0, 1) = 0.5;
  }
  const auto per = build_uniform(0.0, 1.0, 3, true);
  const TracePair t0 = interface_traces(f, 0, per);
  EXPECT_DOUBLE_EQ(t0.minus()[0], 2.5);
  EXPECT_DOUBLE_EQ(t0.plus()[0], -0.5);
  EXPECT_DOUBLE_EQ(t0.jump()[0], -3.0);
  EXPECT_DOUBLE_EQ(t0.average()[0], 1.0);
  const auto wall = build_uniform(0.0, 1.0, 3, false);
  const TracePair tl = interface_traces(f, 0, wall);
  EXPECT_FALSE(tl.has_minus());
  EXPECT_THROW(tl.minus(), InputError);
  const TracePair tr = interface_traces(f, 3, wall);
  EXPECT_FALSE(tr.has_plus());
  EXPECT_DOUBLE_EQ(tr.minus()[0], 2.5);
}

TEST(Field, ConstantNormOnCircle) {
  const auto p = build_uniform(0.0, 2.0 * kPi, 10, true);
  DGField f(10, 1, 2);
  for (std::size_t j = 0; j < 10; ++j) f(j, 0, 0) = 1.0;
  EXPECT_NEAR(l2_norm(f, p, quad_rule(5)), std::sqrt(2.0 * kPi), 1e-13);
  EXPECT_NEAR(l2_norm_modal(f, p), std::sqrt(2.0 * kPi), 1e-13);
}

TEST(Field, ModalNormAgreesWithQuadrature) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> U(-2, 2);
  const Partition1D p({0.0, 0.2, 0.5, 0.6, 1.3}, false);
  for (int k = 0; k <= 5; ++k) {
    DGField f(4, 3, k);
    for (double& c : f.data()) c = U(rng);
    EXPECT_NEAR(l2_norm(f, p, quad_rule(k + 3)), l2_norm_modal(f, p), 1e-12);
    EXPECT_NEAR(inner_product(f, f, p), std::pow(l2_norm_modal(f, p), 2), 1e-12);
  }
  DGField f(4, 1, 4);
  EXPECT_THROW(l2_norm(f, p, quad_rule(3)), InputError);
}

TEST(Field, AxpyScaleCopy) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> U(-1, 1);
  DGField x(5, 2, 2), y(5, 2, 2);
  for (double& c : x.data()) c = U(rng);
  for (double& c : y.data()) c = U(rng);
  DGField z = y;
  axpy(0.0, x, z);
  EXPECT_EQ(z.data(), y.data());
  axpy(1.0, x, z);
  axpy(-1.0, x, z);
  for (std::size_t n = 0; n < z.size(); ++n) EXPECT_NEAR(z.data()[n], y.data()[n], 1e-15);
  scale(2.0, z);
  for (std::size_t n = 0; n < z.size(); ++n) EXPECT_DOUBLE_EQ(z.data()[n], 2.0 * y.data()[n]);
  copy(x, z);
  EXPECT_EQ(z.data(), x.data());
  DGField w(5, 2, 3);
  EXPECT_THROW(axpy(1.0, x, w), InputError);
  EXPECT_THROW(copy(x, w), InputError);
}

TEST(Field, InverseInequalityForTraces) {
  // |v(x_{j+1/2})|^2 <= C h^{-1} ||v||_{I_j}^2 with C = (k+1)^2 for a single cell.
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int k = 0; k <= 5; ++k) {
    const Partition1D p({0.0, 0.37}, false);
    for (int trial = 0; trial < 50; ++trial) {
      DGField f(1, 1, k);
      for (double& c : f.data()) c = U(rng);
      const double tr = std::pow(f.right_trace(0)[0], 2);
      const double n2 = std::pow(l2_norm_modal(f, p), 2);
      EXPECT_LE(tr, (k + 1) * (k + 1) / p.width(0) * n2 * (1 + 1e-12));
    }
  }
}

TEST(Field, CsvRoundTripsCoefficients) {
  DGField f(2, 1, 1);
  f(0, 0, 0) = 0.1;
  f(0, 0, 1) = -1.0 / 3.0;
  f(1, 0, 0) = 1e-300;
  std::ostringstream os;
  write_csv(os, f);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "j,i,l,coeff");
  std::size_t n = 0;
  while (std::getline(is, line)) {
    const auto pos = line.rfind(',');
    EXPECT_EQ(std::stod(line.substr(pos + 1)), f.data()[n]);
    ++n;
  }
  EXPECT_EQ(n, f.size());
}

TEST(Field, ShapeErrors) {
  EXPECT_THROW(DGField(3, 0, 1), InputError);
  EXPECT_THROW(DGField(3, 5, 1), InputError);
  EXPECT_THROW(DGField(3, 1, -1), InputError);
}
