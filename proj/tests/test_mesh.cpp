#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ldg/mesh.hpp"

using namespace ldg;

constexpr double kPi = std::numbers::pi;

TEST(Mesh, UniformWidthsOnPeriodicCircle) {
  const auto p = build_uniform(0.0, 2.0 * kPi, 10, true);
  ASSERT_EQ(p.n_cells(), 10u);
  for (std::size_t j = 0; j < p.n_cells(); ++j) EXPECT_NEAR(p.width(j), kPi / 5.0, 1e-15);
  EXPECT_DOUBLE_EQ(p.gamma(), p.h_min() / p.h_max());
  EXPECT_NEAR(p.gamma(), 1.0, 1e-12);
}

TEST(Mesh, ThreeCellNodes) {
  const auto p = build_uniform(0.0, 1.0, 3, false);
  ASSERT_EQ(p.n_interfaces(), 4u);
  EXPECT_DOUBLE_EQ(p.node(0), 0.0);
  EXPECT_NEAR(p.node(1), 1.0 / 3.0, 1e-16);
  EXPECT_NEAR(p.node(2), 2.0 / 3.0, 1e-16);
  EXPECT_DOUBLE_EQ(p.node(3), 1.0);
}

TEST(Mesh, MaxWidthEighty) {
  const auto p = build_uniform(0.0, 2.0 * kPi, 80, true);
  EXPECT_NEAR(p.h_max(), 2.0 * kPi / 80.0, 1e-15);
  EXPECT_NEAR(p.h_max(), 0.07854, 1e-5);
}

TEST(Mesh, ConstructionErrors) {
  EXPECT_THROW(build_uniform(0.0, 1.0, 0, false), InputError);
  EXPECT_THROW(build_uniform(0.0, 1.0, -3, true), InputError);
  EXPECT_THROW(build_uniform(1.0, 0.0, 4, false), InputError);
  EXPECT_THROW(Partition1D({0.0, 0.5, 0.5, 1.0}, false), InputError);
  EXPECT_THROW(Partition1D({0.0}, false), InputError);
}

TEST(Mesh, ToPhysicalExamples) {
  const auto p = build_uniform(0.0, 2.0 * kPi, 10, true);
  EXPECT_EQ(to_physical(p, 0, -1.0), 0.0);
  EXPECT_NEAR(to_physical(p, 0, 1.0), kPi / 5.0, 1e-15);
  const auto q = build_uniform(0.0, 1.0, 4, false);
  EXPECT_DOUBLE_EQ(to_physical(q, 2, 0.0), 0.625);
  EXPECT_THROW(to_physical(q, 4, 0.0), InputError);
}

TEST(Mesh, EndpointsAreBitExactNodes) {
  const auto p = build_uniform(0.3, 7.1, 37, false);
  for (std::size_t j = 0; j < p.n_cells(); ++j) {
    EXPECT_EQ(p.to_physical(j, -1.0), p.node(j));
    EXPECT_EQ(p.to_physical(j, 1.0), p.node(j + 1));
  }
}

TEST(Mesh, PeriodicInterfaceAliasing) {
  const auto p = build_uniform(0.0, 1.0, 5, true);
  EXPECT_EQ(p.canonical_interface(5), 0u);
  EXPECT_EQ(p.canonical_interface(3), 3u);
  EXPECT_EQ(p.left_cell(0), 4u);
  EXPECT_EQ(p.right_cell(5), 0u);
  const auto q = build_uniform(0.0, 1.0, 5, false);
  EXPECT_EQ(q.canonical_interface(5), 5u);
  EXPECT_EQ(q.left_cell(0), Partition1D::npos);
  EXPECT_EQ(q.right_cell(5), Partition1D::npos);
  EXPECT_THROW(q.left_cell(6), InputError);
}

TEST(Mesh, NonUniformQuasiUniformity) {
  const Partition1D p({0.0, 0.1, 0.3, 0.4, 1.0}, false);
  EXPECT_NEAR(p.h_min(), 0.1, 1e-15);
  EXPECT_NEAR(p.h_max(), 0.6, 1e-15);
  EXPECT_NEAR(p.gamma(), 1.0 / 6.0, 1e-14);
  EXPECT_NEAR(p.center(1), 0.2, 1e-15);
}
