#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "ldg/errors.hpp"

namespace ldg {

/// A partition of [x_lo, x_hi] into N cells.
///
/// Interfaces are numbered 0..N: interface j is the left end of cell j and
/// interface j+1 its right end. Under periodicity interfaces 0 and N carry
/// the same trace pair.
class Partition1D {
 public:
  Partition1D(std::vector<double> nodes, bool periodic) : nodes_(std::move(nodes)), periodic_(periodic) {
    if (nodes_.size() < 2) throw InputError("partition needs at least one cell");
    widths_.resize(nodes_.size() - 1);
    for (std::size_t j = 0; j + 1 < nodes_.size(); ++j) {
      widths_[j] = nodes_[j + 1] - nodes_[j];
      if (!(widths_[j] > 0.0)) throw InputError("partition nodes must be strictly increasing");
    }
    const auto [lo, hi] = std::minmax_element(widths_.begin(), widths_.end());
    h_min_ = *lo;
    h_max_ = *hi;
  }

  std::size_t n_cells() const { return widths_.size(); }
  std::size_t n_interfaces() const { return nodes_.size(); }
  double x_lo() const { return nodes_.front(); }
  double x_hi() const { return nodes_.back(); }
  double length() const { return x_hi() - x_lo(); }
  bool periodic() const { return periodic_; }

  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& widths() const { return widths_; }
  double node(std::size_t i) const { return nodes_.at(i); }
  double width(std::size_t j) const { return widths_[j]; }
  double center(std::size_t j) const { return 0.5 * (nodes_[j] + nodes_[j + 1]); }

  double h_max() const { return h_max_; }
  double h_min() const { return h_min_; }
  /// Quasi-uniformity constant: min_j h_j = gamma * max_j h_j.
  double gamma() const { return h_min_ / h_max_; }

  /// Maps s in [-1, 1] on cell j to x = x_j + s h_j / 2. The endpoints are
  /// returned as the stored nodes so traces line up bit-exactly.
  double to_physical(std::size_t j, double s) const {
    if (j >= n_cells()) throw InputError("cell index " + std::to_string(j) + " out of range");
    if (s == -1.0) return nodes_[j];
    if (s == 1.0) return nodes_[j + 1];
    return center(j) + 0.5 * s * widths_[j];
  }

  /// Canonical interface index: N aliases 0 on periodic meshes.
  std::size_t canonical_interface(std::size_t i) const {
    if (i > n_cells()) throw InputError("interface index " + std::to_string(i) + " out of range");
    return (periodic_ && i == n_cells()) ? 0 : i;
  }

  /// Cell to the left of interface i, or npos on the left boundary of a
  /// non-periodic mesh.
  std::size_t left_cell(std::size_t i) const {
    if (i > n_cells()) throw InputError("interface index out of range");
    if (i == 0) return periodic_ ? n_cells() - 1 : npos;
    return i - 1;
  }
  std::size_t right_cell(std::size_t i) const {
    if (i > n_cells()) throw InputError("interface index out of range");
    if (i == n_cells()) return periodic_ ? 0 : npos;
    return i;
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::vector<double> nodes_;
  std::vector<double> widths_;
  double h_min_ = 0.0;
  double h_max_ = 0.0;
  bool periodic_;
};

inline Partition1D build_uniform(double x_lo, double x_hi, int n_cells, bool periodic) {
  if (n_cells < 1) throw InputError("cell count must be positive");
  if (!(x_hi > x_lo)) throw InputError("interval must satisfy x_hi > x_lo");
  std::vector<double> nodes(static_cast<std::size_t>(n_cells) + 1);
  const double h = (x_hi - x_lo) / n_cells;
  for (int j = 0; j <= n_cells; ++j) nodes[j] = x_lo + j * h;
  nodes.back() = x_hi;
  return Partition1D(std::move(nodes), periodic);
}

inline double to_physical(const Partition1D& p, std::size_t j, double s) { return p.to_physical(j, s); }

}  // namespace ldg
