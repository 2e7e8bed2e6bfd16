#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "ldg/basis.hpp"
#include "ldg/errors.hpp"
#include "ldg/mesh.hpp"
#include "ldg/types.hpp"

namespace ldg {

/// Modal Legendre coefficients of an m-component, degree-k piecewise polynomial
/// on N cells. Storage order is (cell, component, mode).
class DGField {
 public:
  DGField() = default;
  DGField(std::size_t n_cells, int n_comp, int degree)
      : n_cells_(n_cells), n_comp_(n_comp), degree_(degree),
        coeff_(n_cells * static_cast<std::size_t>(n_comp) * (degree + 1), 0.0) {
    if (n_comp < 1 || n_comp > kMaxComponents) throw InputError("component count out of range");
    if (degree < 0) throw InputError("degree must be non-negative");
  }

  std::size_t n_cells() const { return n_cells_; }
  int n_comp() const { return n_comp_; }
  int degree() const { return degree_; }
  int n_modes() const { return degree_ + 1; }
  std::size_t size() const { return coeff_.size(); }

  double& operator()(std::size_t j, int i, int l) { return coeff_[index(j, i, l)]; }
  double operator()(std::size_t j, int i, int l) const { return coeff_[index(j, i, l)]; }

  std::vector<double>& data() { return coeff_; }
  const std::vector<double>& data() const { return coeff_; }

  bool same_shape(const DGField& o) const {
    return n_cells_ == o.n_cells_ && n_comp_ == o.n_comp_ && degree_ == o.degree_;
  }

  /// Value at reference coordinate s in cell j.
  Vec eval(std::size_t j, double s) const {
    check_cell(j);
    Vec v = Vec::Zero(n_comp_);
    for (int l = 0; l < n_modes(); ++l) {
      const double pl = legendre_eval(l, s);
      for (int i = 0; i < n_comp_; ++i) v[i] += (*this)(j, i, l) * pl;
    }
    return v;
  }

  /// Right-end trace of cell j (exact endpoint values, no extrapolation).
  Vec right_trace(std::size_t j) const {
    check_cell(j);
    Vec v = Vec::Zero(n_comp_);
    for (int i = 0; i < n_comp_; ++i)
      for (int l = 0; l < n_modes(); ++l) v[i] += (*this)(j, i, l);
    return v;
  }
  Vec left_trace(std::size_t j) const {
    check_cell(j);
    Vec v = Vec::Zero(n_comp_);
    for (int i = 0; i < n_comp_; ++i)
      for (int l = 0; l < n_modes(); ++l) v[i] += (*this)(j, i, l) * legendre_at_left(l);
    return v;
  }

  double max_abs() const {
    double m = 0.0;
    for (double c : coeff_) m = std::max(m, std::abs(c));
    return m;
  }
  bool all_finite() const {
    for (double c : coeff_)
      if (!std::isfinite(c)) return false;
    return true;
  }

 private:
  std::size_t index(std::size_t j, int i, int l) const {
    return (j * static_cast<std::size_t>(n_comp_) + i) * (degree_ + 1) + l;
  }
  void check_cell(std::size_t j) const {
    if (j >= n_cells_) throw InputError("cell index " + std::to_string(j) + " out of range");
  }

  std::size_t n_cells_ = 0;
  int n_comp_ = 1;
  int degree_ = 0;
  std::vector<double> coeff_;
};

/// One-sided limits at an interface. On a non-periodic mesh the boundary
/// interfaces lack one side.
class TracePair {
 public:
  TracePair() = default;
  TracePair(Vec minus, Vec plus) : minus_(std::move(minus)), plus_(std::move(plus)), has_minus_(true), has_plus_(true) {}
  static TracePair only_minus(Vec minus) {
    TracePair t;
    t.minus_ = std::move(minus);
    t.has_minus_ = true;
    return t;
  }
  static TracePair only_plus(Vec plus) {
    TracePair t;
    t.plus_ = std::move(plus);
    t.has_plus_ = true;
    return t;
  }

  bool has_minus() const { return has_minus_; }
  bool has_plus() const { return has_plus_; }
  const Vec& minus() const {
    if (!has_minus_) throw InputError("interface has no left (minus) trace");
    return minus_;
  }
  const Vec& plus() const {
    if (!has_plus_) throw InputError("interface has no right (plus) trace");
    return plus_;
  }
  /// [p] = p+ - p-.
  Vec jump() const { return plus() - minus(); }
  Vec average() const { return 0.5 * (plus() + minus()); }

 private:
  Vec minus_;
  Vec plus_;
  bool has_minus_ = false;
  bool has_plus_ = false;
};

inline Vec eval(const DGField& f, std::size_t j, double s) { return f.eval(j, s); }

inline TracePair interface_traces(const DGField& f, std::size_t i, const Partition1D& p) {
  if (f.n_cells() != p.n_cells()) throw InputError("field and partition disagree on cell count");
  const std::size_t l = p.left_cell(i);
  const std::size_t r = p.right_cell(i);
  if (l == Partition1D::npos) return TracePair::only_plus(f.left_trace(r));
  if (r == Partition1D::npos) return TracePair::only_minus(f.right_trace(l));
  return TracePair(f.right_trace(l), f.left_trace(r));
}

/// L2 norm by quadrature: sqrt(sum_j sum_q w_q h_j/2 |f(s_q)|^2).
inline double l2_norm(const DGField& f, const Partition1D& p, const QuadRule& quad) {
  if (quad.size() < static_cast<std::size_t>(f.degree() + 1))
    throw InputError("quadrature too coarse for the field degree");
  double sum = 0.0;
  for (std::size_t j = 0; j < f.n_cells(); ++j) {
    const double jac = 0.5 * p.width(j);
    for (std::size_t q = 0; q < quad.size(); ++q) sum += quad.weights[q] * jac * f.eval(j, quad.points[q]).squaredNorm();
  }
  return std::sqrt(sum);
}

/// The same norm from the diagonal modal mass matrix h_j / (2l+1).
inline double l2_norm_modal(const DGField& f, const Partition1D& p) {
  double sum = 0.0;
  for (std::size_t j = 0; j < f.n_cells(); ++j)
    for (int i = 0; i < f.n_comp(); ++i)
      for (int l = 0; l < f.n_modes(); ++l) sum += f(j, i, l) * f(j, i, l) * p.width(j) / (2 * l + 1);
  return std::sqrt(sum);
}

/// L2 inner product of two fields of equal shape.
inline double inner_product(const DGField& a, const DGField& b, const Partition1D& p) {
  if (!a.same_shape(b)) throw InputError("inner product of mismatched fields");
  double sum = 0.0;
  for (std::size_t j = 0; j < a.n_cells(); ++j)
    for (int i = 0; i < a.n_comp(); ++i)
      for (int l = 0; l < a.n_modes(); ++l) sum += a(j, i, l) * b(j, i, l) * p.width(j) / (2 * l + 1);
  return sum;
}

/// y <- a x + y
inline void axpy(double a, const DGField& x, DGField& y) {
  if (!x.same_shape(y)) throw InputError("axpy shape mismatch");
  auto& yd = y.data();
  const auto& xd = x.data();
  for (std::size_t n = 0; n < yd.size(); ++n) yd[n] += a * xd[n];
}

inline void scale(double a, DGField& x) {
  for (double& c : x.data()) c *= a;
}

inline void copy(const DGField& src, DGField& dst) {
  if (!src.same_shape(dst)) throw InputError("copy shape mismatch");
  dst.data() = src.data();
}

/// Rows (j,i,l,coeff), coefficients in %.16e so the file round-trips.
inline void write_csv(std::ostream& os, const DGField& f) {
  os << "j,i,l,coeff\n";
  char buf[64];
  for (std::size_t j = 0; j < f.n_cells(); ++j)
    for (int i = 0; i < f.n_comp(); ++i)
      for (int l = 0; l < f.n_modes(); ++l) {
        std::snprintf(buf, sizeof buf, "%.16e", f(j, i, l));
        os << j << ',' << i << ',' << l << ',' << buf << '\n';
      }
}

}  // namespace ldg
