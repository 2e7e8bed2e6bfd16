#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "ldg/errors.hpp"
#include "ldg/types.hpp"

namespace ldg {

/// Eigenvalues, right eigenvectors (columns of R) and left eigenvectors
/// (rows of L = R^{-1}) of a small real flux Jacobian.
struct EigenDecomp {
  Vec lambda;
  Mat R;
  Mat L;

  int size() const { return static_cast<int>(lambda.size()); }
};

namespace detail {

// Coefficients c[0..m-1] of det(lambda I - J) = lambda^m + c[m-1] lambda^{m-1} + ... + c[0]
// by Faddeev-LeVerrier.
inline std::array<double, kMaxComponents> char_poly(const Mat& J) {
  const int m = static_cast<int>(J.rows());
  std::array<double, kMaxComponents> c{};
  Mat M = Mat::Zero(m, m);
  Mat I = Mat::Identity(m, m);
  double ck = 1.0;  // leading coefficient
  for (int k = 1; k <= m; ++k) {
    M = J * M + ck * I;
    Mat JM = J * M;
    ck = -JM.trace() / k;
    c[m - k] = ck;
  }
  return c;
}

inline double poly_eval(const std::array<double, kMaxComponents>& c, int m, double x) {
  double v = 1.0;
  for (int k = m - 1; k >= 0; --k) v = v * x + c[k];
  return v;
}

inline double poly_deriv(const std::array<double, kMaxComponents>& c, int m, double x) {
  double v = m;
  for (int k = m - 1; k >= 1; --k) v = v * x + k * c[k];
  return v;
}

// Roots of the monic characteristic polynomial of a matrix scaled to unit norm.
inline std::vector<std::complex<double>> poly_roots(const std::array<double, kMaxComponents>& c, int m) {
  using cd = std::complex<double>;
  std::vector<cd> roots;
  if (m == 1) {
    roots.push_back(-c[0]);
  } else if (m == 2) {
    const double b = c[1], cc = c[0];
    const double disc = b * b - 4.0 * cc;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      const double qv = -0.5 * (b + std::copysign(sq, b));
      if (qv == 0.0) {
        roots = {0.0, 0.0};
      } else {
        roots = {qv, cc / qv};
      }
    } else {
      const double sq = std::sqrt(-disc);
      roots = {cd(-0.5 * b, 0.5 * sq), cd(-0.5 * b, -0.5 * sq)};
    }
  } else if (m == 3) {
    // Depressed cubic t^3 + p t + q with lambda = t - a/3.
    const double a = c[2], b = c[1], cc = c[0];
    const double shift = a / 3.0;
    const double p = b - a * a / 3.0;
    const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + cc;
    const double disc = -(4.0 * p * p * p + 27.0 * q * q);
    if (p < 0.0 && disc >= 0.0) {
      const double r = 2.0 * std::sqrt(-p / 3.0);
      double arg = 3.0 * q / (p * r);
      arg = std::clamp(arg, -1.0, 1.0);
      const double phi = std::acos(arg) / 3.0;
      for (int k = 0; k < 3; ++k) roots.push_back(r * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0) - shift);
    } else if (p == 0.0 && q == 0.0) {
      roots = {-shift, -shift, -shift};
    } else {
      // One real root (Cardano) plus a conjugate pair.
      const double sq = std::sqrt(std::max(q * q / 4.0 + p * p * p / 27.0, 0.0));
      const double t = std::cbrt(-q / 2.0 + sq) + std::cbrt(-q / 2.0 - sq);
      roots.push_back(t - shift);
      // Deflate: t^2 + t*t0 + (p + t0^2)
      const double bb = t, c0 = p + t * t;
      const double d2 = bb * bb - 4.0 * c0;
      if (d2 >= 0.0) {
        roots.push_back(0.5 * (-bb + std::sqrt(d2)) - shift);
        roots.push_back(0.5 * (-bb - std::sqrt(d2)) - shift);
      } else {
        roots.push_back(cd(-0.5 * bb - shift, 0.5 * std::sqrt(-d2)));
        roots.push_back(cd(-0.5 * bb - shift, -0.5 * std::sqrt(-d2)));
      }
    }
  } else {
    // Companion-matrix roots by simultaneous (Aberth-Ehrlich) iteration.
    roots.resize(m);
    const cd seed(0.4, 0.9);
    for (int i = 0; i < m; ++i) roots[i] = 1.5 * std::pow(seed, i);
    auto peval = [&](cd x) {
      cd v = 1.0;
      for (int k = m - 1; k >= 0; --k) v = v * x + c[k];
      return v;
    };
    auto pderiv = [&](cd x) {
      cd v = static_cast<double>(m);
      for (int k = m - 1; k >= 1; --k) v = v * x + static_cast<double>(k) * c[k];
      return v;
    };
    for (int it = 0; it < 500; ++it) {
      double change = 0.0;
      for (int i = 0; i < m; ++i) {
        const cd ratio = peval(roots[i]) / pderiv(roots[i]);
        cd sum = 0.0;
        for (int j = 0; j < m; ++j)
          if (j != i) sum += 1.0 / (roots[i] - roots[j]);
        const cd step = ratio / (1.0 - ratio * sum);
        if (std::isfinite(step.real()) && std::isfinite(step.imag())) {
          roots[i] -= step;
          change = std::max(change, std::abs(step));
        }
      }
      if (change < 1e-15) break;
    }
  }
  return roots;
}

// Orthonormal basis of the numerical null space of M (singular values below tol).
inline Mat null_space(const Mat& M, double tol) {
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const int n = static_cast<int>(M.cols());
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > tol) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

// Unit length, largest-magnitude entry positive.
inline void normalize_column(Mat& R, int col) {
  R.col(col).normalize();
  int imax = 0;
  for (int i = 1; i < R.rows(); ++i)
    if (std::abs(R(i, col)) > std::abs(R(imax, col)) + 1e-14) imax = i;
  if (R(imax, col) < 0.0) R.col(col) *= -1.0;
}

}  // namespace detail

/// Residuals used to validate any decomposition.
inline double eig_left_right_residual(const EigenDecomp& e) {
  const int m = e.size();
  return (e.L * e.R - Mat::Identity(m, m)).cwiseAbs().maxCoeff();
}

inline double eig_eigen_residual(const Mat& J, const EigenDecomp& e) {
  return (J * e.R - e.R * e.lambda.asDiagonal()).cwiseAbs().maxCoeff();
}

inline bool eig_is_valid(const Mat& J, const EigenDecomp& e, double tol = 1e-10) {
  if (e.size() != J.rows() || e.R.rows() != J.rows() || e.L.rows() != J.rows()) return false;
  if (!e.lambda.allFinite() || !e.R.allFinite() || !e.L.allFinite()) return false;
  const double scale = std::max(J.norm(), 1e-300);
  return eig_left_right_residual(e) <= tol && eig_eigen_residual(J, e) <= tol * scale + 1e-300;
}

/// Numerical eigendecomposition of a real m x m matrix with a real,
/// complete eigensystem (m <= 4).
///
/// Eigenvalues come from the characteristic polynomial (closed form for
/// m <= 3, Aberth iteration for m = 4); eigenvectors are null vectors of
/// J - lambda I. Nearly repeated roots whose combined null space has full
/// dimension are treated as one degenerate eigenvalue with an orthonormal
/// eigenspace basis. Output is sorted by descending eigenvalue.
inline EigenDecomp decompose_numeric(const Mat& J) {
  const int m = static_cast<int>(J.rows());
  if (m < 1 || m > kMaxComponents || J.cols() != m) throw InputError("decompose: matrix must be square with m <= 4");
  if (!J.allFinite()) throw DecompositionError("decompose: non-finite Jacobian");

  EigenDecomp out;
  const double norm = J.norm();
  if (norm == 0.0) {
    out.lambda = Vec::Zero(m);
    out.R = Mat::Identity(m, m);
    out.L = Mat::Identity(m, m);
    return out;
  }
  const Mat Js = J / norm;
  const auto c = detail::char_poly(Js);
  auto croots = detail::poly_roots(c, m);

  // Repeated roots come back from the polynomial split into tiny complex
  // pairs; those are kept as "uncertain" and must pass the eigenspace test.
  std::vector<double> roots;
  std::vector<double> imag;
  for (const auto& r : croots) {
    if (std::abs(r.imag()) > 1e-3) throw DecompositionError("non-symmetrizable Jacobian: complex eigenvalues");
    imag.push_back(std::abs(r.imag()));
    double x = r.real();
    // Newton polish; skipped where the derivative vanishes (multiple roots).
    for (int it = 0; it < 3; ++it) {
      const double d = detail::poly_deriv(c, m, x);
      if (std::abs(d) < 1e-6) break;
      const double dx = detail::poly_eval(c, m, x) / d;
      if (!std::isfinite(dx)) break;
      x -= dx;
    }
    roots.push_back(x);
  }
  {
    std::vector<int> idx(roots.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    std::sort(idx.begin(), idx.end(), [&](int x, int y) { return roots[x] > roots[y]; });
    std::vector<double> r2;
    std::vector<double> i2;
    for (int i : idx) {
      r2.push_back(roots[i]);
      i2.push_back(imag[i]);
    }
    roots = r2;
    imag = i2;
  }

  // Group roots into clusters that might be one repeated eigenvalue.
  constexpr double kClusterGap = 1e-5;
  constexpr double kUncertainGap = 2e-3;
  Mat R = Mat::Zero(m, m);
  Vec lambda = Vec::Zero(m);
  int col = 0;
  std::size_t a = 0;
  while (a < roots.size()) {
    std::size_t b = a + 1;
    double max_imag = imag[a];
    while (b < roots.size() &&
           (roots[b - 1] - roots[b] < kClusterGap ||
            (std::max(imag[b - 1], imag[b]) > 1e-6 && roots[b - 1] - roots[b] < kUncertainGap))) {
      max_imag = std::max(max_imag, imag[b]);
      ++b;
    }
    const bool any_uncertain = max_imag > 1e-6;
    const int mult = static_cast<int>(b - a);
    bool placed = false;
    if (mult > 1) {
      double mean = 0.0;
      for (std::size_t i = a; i < b; ++i) mean += roots[i];
      mean /= mult;
      // The root spread bounds how far the mean sits from the true value.
      const double tol = std::max(1e-7, 10.0 * (roots[a] - roots[b - 1] + max_imag));
      Mat ns = detail::null_space(Js - mean * Mat::Identity(m, m), tol);
      // Refine: Rayleigh value on the subspace, then the subspace at that value.
      for (int it = 0; it < 3 && ns.cols() == mult; ++it) {
        const double lam = (ns.transpose() * Js * ns).trace() / mult;
        Eigen::JacobiSVD<Mat> svd(Js - lam * Mat::Identity(m, m), Eigen::ComputeFullV);
        ns = svd.matrixV().rightCols(mult);
      }
      if (ns.cols() == mult) {
        // Degenerate eigenvalue: orthonormal eigenspace basis, Rayleigh value.
        const double lam = (ns.transpose() * Js * ns).trace() / mult;
        for (int q = 0; q < mult; ++q) {
          R.col(col) = ns.col(q);
          detail::normalize_column(R, col);
          lambda[col] = lam;
          ++col;
        }
        placed = true;
      }
    }
    if (!placed && any_uncertain) throw DecompositionError("non-symmetrizable Jacobian: complex eigenvalues");
    if (!placed) {
      for (std::size_t i = a; i < b; ++i) {
        const Mat shifted = Js - roots[i] * Mat::Identity(m, m);
        Eigen::JacobiSVD<Mat> svd(shifted, Eigen::ComputeFullV);
        R.col(col) = svd.matrixV().col(m - 1);
        detail::normalize_column(R, col);
        lambda[col] = roots[i];
        ++col;
      }
    }
    a = b;
  }

  Eigen::FullPivLU<Mat> lu(R);
  lu.setThreshold(1e-8);
  if (!lu.isInvertible()) throw DecompositionError("defective Jacobian: eigenvectors are linearly dependent");

  // Descending eigenvalues; ties ordered lexicographically by eigenvector.
  std::vector<int> order(m);
  for (int i = 0; i < m; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    if (std::abs(lambda[x] - lambda[y]) > 1e-8) return lambda[x] > lambda[y];
    for (int r = 0; r < m; ++r) {
      if (std::abs(R(r, x) - R(r, y)) > 1e-12) return R(r, x) < R(r, y);
    }
    return false;
  });
  out.lambda.resize(m);
  out.R.resize(m, m);
  for (int i = 0; i < m; ++i) {
    out.lambda[i] = lambda[order[i]] * norm;
    out.R.col(i) = R.col(order[i]);
  }
  out.L = out.R.inverse();
  return out;
}

/// Decomposition used by the fluxes: a valid problem-supplied hint wins,
/// otherwise the numerical path runs.
inline EigenDecomp decompose(const Mat& J, const std::optional<EigenDecomp>& analytic_hint = std::nullopt) {
  if (analytic_hint && eig_is_valid(J, *analytic_hint)) return *analytic_hint;
  return decompose_numeric(J);
}

}  // namespace ldg
