#pragma once

#include <Eigen/Dense>

namespace ldg {

/// Largest supported component count.
inline constexpr int kMaxComponents = 4;

// Small state vectors and matrices; fixed capacity so nothing touches the heap.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxComponents, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxComponents, kMaxComponents>;

}  // namespace ldg
