#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "ldg/basis.hpp"
#include "ldg/errors.hpp"
#include "ldg/field.hpp"
#include "ldg/mesh.hpp"
#include "ldg/problems.hpp"
#include "ldg/smalleig.hpp"

namespace ldg {

/// Coefficient-wise L2 projection: (2l+1)/h_j int_j func P_l dx.
inline DGField l2_project(const std::function<Vec(double)>& func, const Partition1D& part, int k, const QuadRule& quad) {
  const std::size_t N = part.n_cells();
  const int m = static_cast<int>(func(part.x_lo()).size());
  DGField out(N, m, k);
  for (std::size_t j = 0; j < N; ++j) {
    for (std::size_t q = 0; q < quad.size(); ++q) {
      const double s = quad.points[q];
      const Vec v = func(part.to_physical(j, s));
      for (int l = 0; l <= k; ++l) {
        const double w = 0.5 * (2 * l + 1) * quad.weights[q] * legendre_eval(l, s);
        for (int i = 0; i < m; ++i) out(j, i, l) += w * v[i];
      }
    }
  }
  return out;
}

inline DGField l2_project(const std::function<Vec(double)>& func, const Partition1D& part, int k) {
  return l2_project(func, part, k, quad_rule(k + 3));
}

/// N x N circulant matrix given by its first row, with right-hand side.
/// Row j is the first row rotated right by j.
struct CirculantSystem {
  std::vector<double> first_row;
  std::vector<double> rhs;

  std::size_t n() const { return first_row.size(); }
  double entry(std::size_t r, std::size_t c) const { return first_row[(c + n() - r) % n()]; }
};

namespace detail {

// d I + e S with (S a)_j = a_{j + delta mod N}, delta = +-1.
struct TwoTerm {
  double d;
  double e;
  int delta;
};

inline TwoTerm two_term(const CirculantSystem& sys) {
  const std::size_t N = sys.n();
  if (N == 0) throw InputError("empty circulant system");
  if (N == 1) return {sys.first_row[0], 0.0, 1};
  for (std::size_t c = 2; c + 1 < N; ++c)
    if (sys.first_row[c] != 0.0) throw InputError("circulant solve supports two-term rows only");
  if (N == 2) return {sys.first_row[0], sys.first_row[1], 1};
  if (sys.first_row[1] != 0.0 && sys.first_row[N - 1] != 0.0)
    throw InputError("circulant solve supports two-term rows only");
  if (sys.first_row[N - 1] != 0.0) return {sys.first_row[0], sys.first_row[N - 1], -1};
  return {sys.first_row[0], sys.first_row[1], 1};
}

inline std::size_t wrap(long long j, std::size_t N) {
  const long long n = static_cast<long long>(N);
  return static_cast<std::size_t>(((j % n) + n) % n);
}

// Geometric-series inverse: a = (d (1 - q^N))^{-1} sum_n q^n S^n c, q = -e/d, |q| <= 1.
inline std::vector<double> solve_two_term(const TwoTerm& t, const std::vector<double>& c) {
  const std::size_t N = c.size();
  if (std::abs(t.e) > std::abs(t.d)) {
    // d I + e S = e S (I + (d/e) S^{-1}): solve the flipped system on S^{-1} c / e.
    std::vector<double> c2(N);
    for (std::size_t j = 0; j < N; ++j) c2[j] = c[wrap(static_cast<long long>(j) - t.delta, N)] / t.e;
    return solve_two_term({1.0, t.d / t.e, -t.delta}, c2);
  }
  const double q = -t.e / t.d;
  const double qN = std::pow(q, static_cast<double>(N));
  const double denom = t.d * (1.0 - qN);
  if (denom == 0.0 || std::abs(1.0 - qN) < 1e-14) throw SingularSystemError("singular circulant system");
  std::vector<double> x(N);
  // x_0 = sum_n q^n c_{n delta}
  double acc = 0.0, qn = 1.0;
  for (std::size_t n = 0; n < N; ++n) {
    acc += qn * c[wrap(static_cast<long long>(n) * t.delta, N)];
    qn *= q;
  }
  x[0] = acc;
  // x_{j - delta} = (1 - q^N) c_{j - delta} + q x_j
  std::size_t j = 0;
  for (std::size_t step = 1; step < N; ++step) {
    const std::size_t prev = wrap(static_cast<long long>(j) - t.delta, N);
    x[prev] = (1.0 - qN) * c[prev] + q * x[j];
    j = prev;
  }
  for (double& v : x) v /= denom;
  return x;
}

}  // namespace detail

/// Closed-form determinant; for the two-term pattern d I + e S this is
/// d^N - (-e)^N.
inline double circulant_determinant(const CirculantSystem& sys) {
  const std::size_t N = sys.n();
  const auto t = detail::two_term(sys);
  if (N == 1) return t.d;
  return std::pow(t.d, static_cast<double>(N)) - std::pow(-t.e, static_cast<double>(N));
}

inline std::vector<double> circulant_solve(const CirculantSystem& sys) {
  if (sys.rhs.size() != sys.n()) throw InputError("circulant rhs size mismatch");
  const auto t = detail::two_term(sys);
  if (sys.n() == 1) {
    if (t.d == 0.0) throw SingularSystemError("singular 1x1 circulant system");
    return {sys.rhs[0] / t.d};
  }
  return detail::solve_two_term(t, sys.rhs);
}

/// Which weighted endpoint condition closes the projection:
/// plus  -> (pi z)^(theta)   = z^(theta)   at x_{j+1/2},
/// minus -> (pi z)^(1-theta) = z^(1-theta) at x_{j-1/2}.
enum class GGRSide { plus, minus };

/// z restricted to cell j, evaluated at physical x (allows broken functions).
using BrokenScalar = std::function<double(std::size_t j, double x)>;

/// Scalar generalized Gauss-Radau projection on a periodic mesh. Modes
/// 0..k-1 are L2 moments; the mode-k coefficients solve the circulant
/// system of endpoint conditions. endpoint_offset (size N, optional) is
/// added to the right-hand side of the condition owned by cell j.
inline DGField ggr_scalar(const BrokenScalar& z, const Partition1D& part, int k, double theta, GGRSide side,
                          const std::vector<double>* endpoint_offset = nullptr) {
  if (!part.periodic()) throw InputError("GGR projection requires a periodic mesh");
  const std::size_t N = part.n_cells();
  if (endpoint_offset && endpoint_offset->size() != N) throw InputError("endpoint offset size mismatch");
  const double tb = 1.0 - theta;
  // High-order moments: the projection is a verification device, so its
  // defining conditions should hold well below the discretization error.
  const QuadRule quad = quad_rule(k + 12);
  DGField out(N, 1, k);
  for (std::size_t j = 0; j < N; ++j) {
    for (std::size_t q = 0; q < quad.size(); ++q) {
      const double s = quad.points[q];
      const double zv = z(j, part.to_physical(j, s));
      for (int l = 0; l < k; ++l) out(j, 0, l) += 0.5 * (2 * l + 1) * quad.weights[q] * legendre_eval(l, s) * zv;
    }
  }
  auto low_right = [&](std::size_t j) {
    double v = 0.0;
    for (int l = 0; l < k; ++l) v += out(j, 0, l);
    return v;
  };
  auto low_left = [&](std::size_t j) {
    double v = 0.0;
    for (int l = 0; l < k; ++l) v += out(j, 0, l) * legendre_at_left(l);
    return v;
  };
  const double sk = legendre_at_left(k);
  CirculantSystem sys;
  sys.first_row.assign(N, 0.0);
  sys.rhs.assign(N, 0.0);
  for (std::size_t j = 0; j < N; ++j) {
    const double off = endpoint_offset ? (*endpoint_offset)[j] : 0.0;
    if (side == GGRSide::plus) {
      const std::size_t jn = (j + 1) % N;
      const double x = part.node(j + 1);
      const double target = theta * z(j, x) + tb * z(jn, x);
      sys.rhs[j] = target + off - theta * low_right(j) - tb * low_left(jn);
    } else {
      const std::size_t jp = (j + N - 1) % N;
      const double x = part.node(j);
      const double target = tb * z(jp, x) + theta * z(j, x);
      sys.rhs[j] = target + off - tb * low_right(jp) - theta * low_left(j);
    }
  }
  if (N == 1) {
    sys.first_row[0] = theta + tb * sk;
  } else if (side == GGRSide::plus) {
    sys.first_row[0] = theta;
    sys.first_row[1] += tb * sk;
  } else {
    sys.first_row[0] = theta * sk;
    sys.first_row[N - 1] += tb;
  }
  const std::vector<double> ak = circulant_solve(sys);
  for (std::size_t j = 0; j < N; ++j) out(j, 0, k) = ak[j];
  return out;
}

inline DGField ggr_scalar(const std::function<double(double)>& z, const Partition1D& part, int k, double theta,
                          GGRSide side) {
  return ggr_scalar([&z](std::size_t, double x) { return z(x); }, part, k, theta, side);
}

/// Eigendecompositions of f'(u(x_{j+1/2})) for every cell j (the right
/// interface of the cell), frozen across the cell.
inline std::vector<EigenDecomp> interface_eigs(const ProblemSpec& problem, const std::function<Vec(double)>& u,
                                               const Partition1D& part) {
  std::vector<EigenDecomp> eigs;
  eigs.reserve(part.n_cells());
  for (std::size_t j = 0; j < part.n_cells(); ++j) {
    const Vec state = u(part.node(j + 1));
    eigs.push_back(decompose(problem.fprime(state), problem.hint(state)));
  }
  return eigs;
}

/// Vector GGR projection through the characteristic decomposition: each
/// characteristic variable l_i . u (with the cell's frozen l_i) is projected
/// with the plus-side condition if lambda_i >= 0 and the minus-side one
/// otherwise, then mapped back with the cell's R.
inline DGField ggr_vector(const std::function<Vec(double)>& u, const Partition1D& part, int k, double theta,
                          const std::vector<EigenDecomp>& eigs) {
  const std::size_t N = part.n_cells();
  if (eigs.size() != N) throw InputError("ggr_vector needs one decomposition per cell");
  const int m = eigs.front().size();
  std::vector<DGField> z_proj;
  for (int i = 0; i < m; ++i) {
    const bool nonneg = eigs[0].lambda[i] >= 0.0;
    for (std::size_t j = 1; j < N; ++j)
      if ((eigs[j].lambda[i] >= 0.0) != nonneg)
        throw InputError("characteristic field " + std::to_string(i) + " changes sign across the mesh");
    const BrokenScalar zi = [&, i](std::size_t j, double x) { return eigs[j].L.row(i).dot(u(x)); };
    z_proj.push_back(ggr_scalar(zi, part, k, theta, nonneg ? GGRSide::plus : GGRSide::minus));
  }
  DGField out(N, m, k);
  for (std::size_t j = 0; j < N; ++j)
    for (int l = 0; l <= k; ++l) {
      Vec zc(m);
      for (int i = 0; i < m; ++i) zc[i] = z_proj[i](j, 0, l);
      const Vec uc = eigs[j].R * zc;
      for (int i = 0; i < m; ++i) out(j, i, l) = uc[i];
    }
  return out;
}

/// Result of the modified auxiliary projection, with the endpoint targets
/// c_j (one m-vector per cell, attached to x_{j-1/2}).
struct ModifiedProjection {
  DGField field;
  std::vector<Vec> c;
  DGField u_projection;  // the vector GGR projection of u used for eta_u
};

/// Modified projection of p for constant, invertible A:
/// L2 moments up to degree k-1 and (P p - p)^(1-theta)_{j-1/2} = c_j with
/// c_j = -A^{-1/2} f'(u) eta_u^(theta) at x_{j-1/2}, eta_u = u - (vector GGR of u).
inline ModifiedProjection modified_projection_p(const std::function<Vec(double)>& p, const std::function<Vec(double)>& u,
                                                const ProblemSpec& problem, const Partition1D& part, int k,
                                                double theta, const std::vector<EigenDecomp>& eigs) {
  if (!part.periodic()) throw InputError("modified projection requires a periodic mesh");
  const std::size_t N = part.n_cells();
  const int m = problem.m;
  const Mat sqrtA = problem.B(Vec::Zero(m));
  Eigen::FullPivLU<Mat> lu(sqrtA);
  if (!lu.isInvertible()) throw SingularSystemError("modified projection needs an invertible A^{1/2}");
  const Mat inv_sqrtA = lu.inverse();

  ModifiedProjection out;
  out.u_projection = ggr_vector(u, part, k, theta, eigs);
  const DGField& pu = out.u_projection;
  out.c.resize(N);
  for (std::size_t j = 0; j < N; ++j) {
    const std::size_t jp = (j + N - 1) % N;
    const double x = part.node(j);
    const Vec ux = u(x);
    const Vec eta_minus = ux - pu.right_trace(jp);
    const Vec eta_plus = ux - pu.left_trace(j);
    const Vec eta_theta = theta * eta_minus + (1.0 - theta) * eta_plus;
    out.c[j] = -inv_sqrtA * (problem.fprime(ux) * eta_theta);
  }
  out.field = DGField(N, m, k);
  std::vector<double> offset(N);
  for (int i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < N; ++j) offset[j] = out.c[j][i];
    const BrokenScalar pi = [&, i](std::size_t, double x) { return p(x)[i]; };
    const DGField comp = ggr_scalar(pi, part, k, theta, GGRSide::minus, &offset);
    for (std::size_t j = 0; j < N; ++j)
      for (int l = 0; l <= k; ++l) out.field(j, i, l) = comp(j, 0, l);
  }
  return out;
}

/// L2 distance between a DG field and a function, by n-point quadrature per cell.
inline double l2_error(const DGField& uh, const std::function<Vec(double)>& exact, const Partition1D& part, int n_points) {
  const QuadRule quad = quad_rule(n_points);
  double sum = 0.0;
  for (std::size_t j = 0; j < uh.n_cells(); ++j) {
    const double jac = 0.5 * part.width(j);
    for (std::size_t q = 0; q < quad.size(); ++q) {
      const double s = quad.points[q];
      sum += quad.weights[q] * jac * (uh.eval(j, s) - exact(part.to_physical(j, s))).squaredNorm();
    }
  }
  return std::sqrt(sum);
}

}  // namespace ldg
