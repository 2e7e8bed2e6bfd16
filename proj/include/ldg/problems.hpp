#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "ldg/errors.hpp"
#include "ldg/smalleig.hpp"
#include "ldg/types.hpp"

namespace ldg {

enum class BoundaryKind { periodic, dirichlet, mixed };

inline std::string to_string(BoundaryKind k) {
  switch (k) {
    case BoundaryKind::periodic: return "periodic";
    case BoundaryKind::dirichlet: return "dirichlet";
    case BoundaryKind::mixed: return "mixed";
  }
  return "?";
}

using TimeData = std::function<Vec(double t)>;

/// Boundary data. Mixed means Dirichlet on the left and a prescribed u_x on
/// the right.
struct BoundaryCondition {
  BoundaryKind kind = BoundaryKind::periodic;
  TimeData left;      // u(x_lo, t)
  TimeData right;     // u(x_hi, t), Dirichlet only
  TimeData right_dx;  // u_x(x_hi, t), mixed only
};

using StateFn = std::function<Vec(const Vec&)>;
using MatrixFn = std::function<Mat(const Vec&)>;
using SpaceTimeFn = std::function<Vec(double x, double t)>;
using HintFn = std::function<std::optional<EigenDecomp>(const Vec&)>;
/// Source values at a fixed point set for a given t, written to out[q].
using PointSourceFn = std::function<void(double t, std::vector<Vec>& out)>;

/// u_t + f(u)_x = (A(u) u_x)_x + source on (x_lo, x_hi), with B^2 = A and g' = B.
struct ProblemSpec {
  std::string id;
  int m = 1;
  double x_lo = 0.0;
  double x_hi = 2.0 * std::numbers::pi;

  StateFn f;
  MatrixFn fprime;
  MatrixFn A;
  MatrixFn B;
  StateFn g;
  SpaceTimeFn source;
  // Optional fast path: binds the source to fixed points (same values as source).
  std::function<PointSourceFn(const std::vector<double>& xs)> bind_source;
  std::optional<SpaceTimeFn> exact;
  std::optional<SpaceTimeFn> exact_dx;  // u_x of the exact solution
  std::function<Vec(double x)> initial;
  BoundaryCondition bc;
  HintFn eig_hint;

  bool linear_diffusion = true;    // A independent of u
  bool diagonal_diffusion = true;  // A(u) diagonal for every u

  bool periodic() const { return bc.kind == BoundaryKind::periodic; }
  std::optional<EigenDecomp> hint(const Vec& u) const { return eig_hint ? eig_hint(u) : std::nullopt; }
};

namespace detail {

// One exact-solution component e^{alpha t} sin(beta x + gamma t).
struct SineMode {
  double alpha, beta, gamma;
  double u(double x, double t) const { return std::exp(alpha * t) * std::sin(beta * x + gamma * t); }
  double ux(double x, double t) const { return beta * std::exp(alpha * t) * std::cos(beta * x + gamma * t); }
  double uxx(double x, double t) const { return -beta * beta * u(x, t); }
  double ut(double x, double t) const {
    return alpha * u(x, t) + gamma * std::exp(alpha * t) * std::cos(beta * x + gamma * t);
  }
};

// sin / cos of beta x per point, so each t needs one exp and one sincos per mode.
struct ModeTable {
  std::vector<double> sb, cb;
  ModeTable(const SineMode& md, const std::vector<double>& xs) : sb(xs.size()), cb(xs.size()) {
    for (std::size_t q = 0; q < xs.size(); ++q) {
      sb[q] = std::sin(md.beta * xs[q]);
      cb[q] = std::cos(md.beta * xs[q]);
    }
  }
};

// Fills (u, u_x, u_t) of one mode at point q given e^{alpha t}, cos and sin of gamma t.
inline void mode_values(const SineMode& md, const ModeTable& tb, std::size_t q, double e, double cg, double sg,
                        double& u, double& ux, double& ut) {
  const double S = tb.sb[q] * cg + tb.cb[q] * sg;
  const double C = tb.cb[q] * cg - tb.sb[q] * sg;
  u = e * S;
  ux = md.beta * e * C;
  ut = md.alpha * u + md.gamma * e * C;
}

inline void set_diagonal_hint(ProblemSpec& p) {
  const MatrixFn fp = p.fprime;
  const int m = p.m;
  p.eig_hint = [fp, m](const Vec& u) -> std::optional<EigenDecomp> {
    EigenDecomp e;
    e.lambda = fp(u).diagonal();
    e.R = Mat::Identity(m, m);
    e.L = Mat::Identity(m, m);
    return e;
  };
}

inline void set_constant_diffusion(ProblemSpec& p, double a) {
  const int m = p.m;
  const double b = std::sqrt(a);
  p.A = [m, a](const Vec&) -> Mat { return a * Mat::Identity(m, m); };
  p.B = [m, b](const Vec&) -> Mat { return b * Mat::Identity(m, m); };
  p.g = [b](const Vec& u) -> Vec { return b * u; };
  p.linear_diffusion = true;
  p.diagonal_diffusion = true;
}

// Periodic cubic-flux system on (0, 2 pi) with A = a I and sine-mode exact solution.
inline ProblemSpec cubic_family(std::string id, double a, std::vector<SineMode> modes) {
  ProblemSpec p;
  p.id = std::move(id);
  p.m = static_cast<int>(modes.size());
  p.x_lo = 0.0;
  p.x_hi = 2.0 * std::numbers::pi;
  p.f = [](const Vec& u) -> Vec { return u.array().cube().matrix(); };
  p.fprime = [](const Vec& u) -> Mat {
    Vec d = 3.0 * u.array().square().matrix();
    return d.asDiagonal();
  };
  set_constant_diffusion(p, a);
  p.exact = [modes](double x, double t) -> Vec {
    Vec v(modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i) v[i] = modes[i].u(x, t);
    return v;
  };
  p.exact_dx = [modes](double x, double t) -> Vec {
    Vec v(modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i) v[i] = modes[i].ux(x, t);
    return v;
  };
  p.source = [modes, a](double x, double t) -> Vec {
    Vec v(modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i) {
      const auto& md = modes[i];
      const double u = md.u(x, t);
      v[i] = md.ut(x, t) + 3.0 * u * u * md.ux(x, t) - a * md.uxx(x, t);
    }
    return v;
  };
  p.bind_source = [modes, a](const std::vector<double>& xs) -> PointSourceFn {
    std::vector<ModeTable> tables;
    for (const auto& md : modes) tables.emplace_back(md, xs);
    return [modes, a, tables](double t, std::vector<Vec>& out) {
      const std::size_t m = modes.size();
      out.resize(tables.front().sb.size());
      for (auto& v : out) v.resize(static_cast<Eigen::Index>(m));
      for (std::size_t i = 0; i < m; ++i) {
        const SineMode& md = modes[i];
        const double e = std::exp(md.alpha * t), cg = std::cos(md.gamma * t), sg = std::sin(md.gamma * t);
        for (std::size_t q = 0; q < out.size(); ++q) {
          double u, ux, ut;
          mode_values(md, tables[i], q, e, cg, sg, u, ux, ut);
          out[q][static_cast<Eigen::Index>(i)] = ut + 3.0 * u * u * ux + a * md.beta * md.beta * u;
        }
      }
    };
  };
  const auto ex = *p.exact;
  p.initial = [ex](double x) { return ex(x, 0.0); };
  p.bc.kind = BoundaryKind::periodic;
  set_diagonal_hint(p);
  return p;
}

inline ProblemSpec ex4(BoundaryKind kind) {
  ProblemSpec p;
  p.id = kind == BoundaryKind::mixed ? "ex4_mixed" : "ex4_dirichlet";
  p.m = 2;
  p.x_lo = 0.0;
  p.x_hi = std::numbers::pi;
  const SineMode md{-1.0, 3.0, 1.0};
  p.f = [](const Vec& u) -> Vec { return 0.5 * u.array().square().matrix(); };
  p.fprime = [](const Vec& u) -> Mat { return u.asDiagonal(); };
  set_constant_diffusion(p, 1.0);
  p.exact = [md](double x, double t) -> Vec { return Vec::Constant(2, md.u(x, t)); };
  p.exact_dx = [md](double x, double t) -> Vec { return Vec::Constant(2, md.ux(x, t)); };
  p.source = [md](double x, double t) -> Vec {
    const double u = md.u(x, t);
    return Vec::Constant(2, md.ut(x, t) + u * md.ux(x, t) - md.uxx(x, t));
  };
  p.bind_source = [md](const std::vector<double>& xs) -> PointSourceFn {
    const ModeTable tb(md, xs);
    return [md, tb](double t, std::vector<Vec>& out) {
      const double e = std::exp(md.alpha * t), cg = std::cos(md.gamma * t), sg = std::sin(md.gamma * t);
      out.resize(tb.sb.size());
      for (std::size_t q = 0; q < out.size(); ++q) {
        double u, ux, ut;
        mode_values(md, tb, q, e, cg, sg, u, ux, ut);
        out[q] = Vec::Constant(2, ut + u * ux + md.beta * md.beta * u);
      }
    };
  };
  p.initial = [md](double x) -> Vec { return Vec::Constant(2, md.u(x, 0.0)); };
  p.bc.kind = kind;
  p.bc.left = [](double t) -> Vec { return Vec::Constant(2, std::exp(-t) * std::sin(t)); };
  if (kind == BoundaryKind::mixed) {
    p.bc.right_dx = [](double t) -> Vec {
      return Vec::Constant(2, 3.0 * std::exp(-t) * std::cos(3.0 * std::numbers::pi + t));
    };
  } else {
    p.bc.right = [](double t) -> Vec { return Vec::Constant(2, std::exp(-t) * std::sin(3.0 * std::numbers::pi + t)); };
  }
  set_diagonal_hint(p);
  return p;
}

inline ProblemSpec ex5() {
  ProblemSpec p;
  p.id = "ex5_nonlindiff";
  p.m = 2;
  p.x_lo = 0.0;
  p.x_hi = 2.0 * std::numbers::pi;
  p.f = [](const Vec& u) -> Vec { return Vec::Constant(2, u[0] + u[1]); };
  p.fprime = [](const Vec&) -> Mat { return Mat::Ones(2, 2); };
  p.A = [](const Vec& u) -> Mat {
    Vec d = u.array().pow(4).matrix();
    return d.asDiagonal();
  };
  p.B = [](const Vec& u) -> Mat {
    Vec d = u.array().square().matrix();
    return d.asDiagonal();
  };
  p.g = [](const Vec& u) -> Vec { return (u.array().cube() / 3.0).matrix(); };
  p.linear_diffusion = false;
  p.diagonal_diffusion = true;
  p.exact = [](double x, double t) -> Vec { return Vec::Constant(2, std::sin(x - t)); };
  p.exact_dx = [](double x, double t) -> Vec { return Vec::Constant(2, std::cos(x - t)); };
  p.source = [](double x, double t) -> Vec {
    const double s = std::sin(x - t), c = std::cos(x - t);
    // u_t + (u1 + u2)_x - (u^4 u_x)_x
    return Vec::Constant(2, -c + 2.0 * c - (4.0 * s * s * s * c * c - s * s * s * s * s));
  };
  p.initial = [](double x) -> Vec { return Vec::Constant(2, std::sin(x)); };
  p.bc.kind = BoundaryKind::periodic;
  p.eig_hint = [](const Vec&) -> std::optional<EigenDecomp> {
    const double r = std::sqrt(0.5);
    EigenDecomp e;
    e.lambda = Vec(2);
    e.lambda << 2.0, 0.0;
    e.R = Mat(2, 2);
    e.R << r, r, r, -r;
    e.L = e.R;
    return e;
  };
  return p;
}

}  // namespace detail

// Buckley-Leverett fractional flow w^2 / (w^2 + (1-w)^2) and its derivative.
inline double bl_flux(double w) { return w * w / (w * w + (1.0 - w) * (1.0 - w)); }
inline double bl_flux_deriv(double w) {
  const double d = w * w + (1.0 - w) * (1.0 - w);
  return 2.0 * w * (1.0 - w) / (d * d);
}

/// Degenerate coefficient 4w(1-w) on [0,1], zero elsewhere.
inline double degenerate_a(double w) { return (w >= 0.0 && w <= 1.0) ? 4.0 * w * (1.0 - w) : 0.0; }

/// g(w) = int_0^w 0.1 sqrt(a(s)) ds in closed form, constant outside [0,1].
inline double degenerate_g(double w) {
  const double c = std::clamp(w, 0.0, 1.0);
  const double root = std::sqrt(std::max(c * (1.0 - c), 0.0));
  return 0.2 * ((2.0 * c - 1.0) * root / 4.0 + std::asin(std::sqrt(c)) / 4.0);
}

namespace detail {

inline ProblemSpec ex6() {
  ProblemSpec p;
  p.id = "ex6_buckley";
  p.m = 2;
  p.x_lo = 0.0;
  p.x_hi = 1.0;
  p.f = [](const Vec& u) -> Vec {
    Vec v(2);
    v << bl_flux(u[1]), bl_flux(u[0]);
    return v;
  };
  p.fprime = [](const Vec& u) -> Mat {
    Mat J = Mat::Zero(2, 2);
    J(0, 1) = bl_flux_deriv(u[1]);
    J(1, 0) = bl_flux_deriv(u[0]);
    return J;
  };
  p.A = [](const Vec& u) -> Mat {
    Mat M = Mat::Zero(2, 2);
    M(0, 0) = 0.01 * degenerate_a(u[0]);
    M(1, 1) = 0.01 * degenerate_a(u[1]);
    return M;
  };
  p.B = [](const Vec& u) -> Mat {
    Mat M = Mat::Zero(2, 2);
    M(0, 0) = 0.1 * std::sqrt(degenerate_a(u[0]));
    M(1, 1) = 0.1 * std::sqrt(degenerate_a(u[1]));
    return M;
  };
  p.g = [](const Vec& u) -> Vec {
    Vec v(2);
    v << degenerate_g(u[0]), degenerate_g(u[1]);
    return v;
  };
  p.linear_diffusion = false;
  p.diagonal_diffusion = true;
  p.source = [](double, double) -> Vec { return Vec::Zero(2); };
  p.initial = [](double x) -> Vec { return Vec::Constant(2, x <= 1.0 / 3.0 ? 1.0 - 3.0 * x : 0.0); };
  p.bc.kind = BoundaryKind::dirichlet;
  p.bc.left = [](double) -> Vec { return Vec::Constant(2, 1.0); };
  p.bc.right = [](double) -> Vec { return Vec::Zero(2); };
  // J = [[0, a], [b, 0]]: lambda = +-sqrt(ab), r = (a, +-sqrt(ab)).
  p.eig_hint = [](const Vec& u) -> std::optional<EigenDecomp> {
    const double a = bl_flux_deriv(u[1]);
    const double b = bl_flux_deriv(u[0]);
    EigenDecomp e;
    e.lambda = Vec(2);
    e.R = Mat(2, 2);
    if (a == 0.0 && b == 0.0) {
      e.lambda << 0.0, 0.0;
      e.R = Mat::Identity(2, 2);
      e.L = Mat::Identity(2, 2);
      return e;
    }
    if (!(a * b > 0.0)) return std::nullopt;
    const double s = std::sqrt(a * b);
    e.lambda << s, -s;
    e.R << a, a, s, -s;
    e.R.col(0).normalize();
    e.R.col(1).normalize();
    if (a < 0.0) e.R *= -1.0;
    e.L = e.R.inverse();
    return e;
  };
  return p;
}

}  // namespace detail

inline const std::vector<std::string>& builtin_ids() {
  static const std::vector<std::string> ids = {"ex1_cubic",    "ex1_convdom",   "ex1_aniso",      "ex3_longtime",
                                               "ex4_mixed",    "ex4_dirichlet", "ex5_nonlindiff", "ex6_buckley"};
  return ids;
}

/// Compiled-in problems by id.
inline ProblemSpec builtin(const std::string& name) {
  using detail::SineMode;
  const std::vector<SineMode> ex1_modes = {{-1.0, 2.0, 1.0}, {-1.0, 2.0, -1.0}, {-2.0, 1.0, 1.0}};
  if (name == "ex1_cubic") return detail::cubic_family(name, 1.0, ex1_modes);
  if (name == "ex1_convdom") return detail::cubic_family(name, 1e-4, ex1_modes);
  if (name == "ex1_aniso") return detail::cubic_family(name, 100.0, ex1_modes);
  if (name == "ex3_longtime")
    return detail::cubic_family(name, 1.0, {{-0.01, 2.0, 0.1}, {-0.01, 2.0, -0.1}, {-0.01, 1.0, 0.1}});
  if (name == "ex4_mixed") return detail::ex4(BoundaryKind::mixed);
  if (name == "ex4_dirichlet") return detail::ex4(BoundaryKind::dirichlet);
  if (name == "ex5_nonlindiff") return detail::ex5();
  if (name == "ex6_buckley") return detail::ex6();
  throw InputError("unknown problem id '" + name + "'");
}

}  // namespace ldg
