#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "ldg/basis.hpp"
#include "ldg/errors.hpp"
#include "ldg/field.hpp"
#include "ldg/fluxes.hpp"
#include "ldg/mesh.hpp"
#include "ldg/problems.hpp"
#include "ldg/smalleig.hpp"

namespace ldg {

/// Residual of the DG operator
///   H_j^theta(C p, P_l e_i) = int_j (P_l)_x e_i^T C p - e_i^T C p^(theta)|_{j+1/2} + (-1)^l e_i^T C p^(theta)|_{j-1/2}
/// for a constant matrix C on a periodic mesh, one entry per (cell, component, test mode).
inline DGField h_theta_residual(const DGField& p, const Mat& C, double theta, const Partition1D& part) {
  if (!part.periodic()) throw InputError("h_theta_residual requires a periodic mesh");
  const std::size_t N = p.n_cells();
  const int m = p.n_comp();
  const int nm = p.n_modes();
  const BasisTable bt(p.degree(), quad_rule(p.degree() + 2));
  std::vector<Vec> hat(N + 1);
  for (std::size_t i = 0; i <= N; ++i) {
    const TracePair tr = interface_traces(p, i, part);
    hat[i] = C * weighted_average(tr.minus(), tr.plus(), theta);
  }
  DGField r(N, m, p.degree());
  for (std::size_t j = 0; j < N; ++j) {
    for (std::size_t q = 0; q < bt.rule.size(); ++q) {
      Vec pq = Vec::Zero(m);
      for (int i = 0; i < m; ++i)
        for (int l = 0; l < nm; ++l) pq[i] += p(j, i, l) * bt.P(q, l);
      const Vec cp = C * pq;
      for (int l = 0; l < nm; ++l) {
        const double wd = bt.rule.weights[q] * bt.dP(q, l);
        for (int i = 0; i < m; ++i) r(j, i, l) += wd * cp[i];
      }
    }
    for (int l = 0; l < nm; ++l)
      for (int i = 0; i < m; ++i) r(j, i, l) += -hat[j + 1][i] + legendre_at_left(l) * hat[j][i];
  }
  return r;
}

/// sum_j H_j^theta(C p, q) on a periodic mesh.
inline double h_theta_form(const DGField& p, const DGField& q, const Mat& C, double theta, const Partition1D& part) {
  if (!p.same_shape(q)) throw InputError("h_theta_form shape mismatch");
  const DGField r = h_theta_residual(p, C, theta, part);
  double s = 0.0;
  for (std::size_t n = 0; n < r.size(); ++n) s += r.data()[n] * q.data()[n];
  return s;
}

struct OperatorOptions {
  int quad_points = 0;                     // 0 selects k + 3
  bool force_nonlinear_diffusion = false;  // use the g / B_hat path even for constant A
  bool numeric_eig = false;                // ignore analytic eigen hints
  // Interior-penalty weight on the Dirichlet end whose cell trace does not
  // enter u_hat (right end for flux1, left end for flux2); 0 keeps the
  // plain (f, g, p) boundary triple.
  double dirichlet_penalty = 1.0;
};

/// Interface values (f_hat, u_hat, p_hat) at a domain end.
struct BoundaryFluxValues {
  Vec f_hat;
  Vec u_hat;
  Vec p_hat;
};

/// The semi-discrete LDG operator u_h -> d u_h / dt.
///
/// Evaluation order per call: traces of u_h, interface values of the
/// auxiliary argument, the auxiliary field p_h (diagonal mass solve), traces
/// of p_h, convective and diffusive interface fluxes, then the cell residual.
/// Workspace buffers make a single instance unsafe for concurrent rhs calls.
class SemiDiscreteOp {
 public:
  SemiDiscreteOp(ProblemSpec problem, Partition1D partition, int degree, FluxConfig cfg, OperatorOptions opts = {})
      : problem_(std::move(problem)), part_(std::move(partition)), k_(degree), cfg_(cfg), opts_(opts) {
    if (degree < 0 || degree > 7) throw InputError("degree must be in 0..7");
    if (problem_.periodic() != part_.periodic()) throw InputError("mesh periodicity does not match the boundary condition");
    if (!std::isfinite(cfg_.theta)) throw InputError("theta must be finite");
    const int nq = opts_.quad_points > 0 ? opts_.quad_points : k_ + 3;
    bt_ = BasisTable(k_, quad_rule(nq));
    nonlinear_ = opts_.force_nonlinear_diffusion || !problem_.linear_diffusion;
    b_hat_mode_ = resolve_b_hat_mode(cfg_.b_hat, problem_.diagonal_diffusion);
    B0_ = problem_.B(Vec::Zero(problem_.m));
    B0_diag_ = B0_.diagonal();
    B0_is_diag_ = (B0_ - Mat(B0_diag_.asDiagonal())).cwiseAbs().maxCoeff() == 0.0;
    const std::size_t N = part_.n_cells();
    xq_.resize(N * bt_.rule.size());
    for (std::size_t j = 0; j < N; ++j)
      for (std::size_t q = 0; q < bt_.rule.size(); ++q) xq_[j * bt_.rule.size() + q] = part_.to_physical(j, bt_.rule.points[q]);
    if (problem_.bind_source) point_source_ = problem_.bind_source(xq_);
    uq_.resize(N * bt_.rule.size());
    pq_.resize(N * bt_.rule.size());
    u_left_.resize(N);
    u_right_.resize(N);
    p_left_.resize(N);
    p_right_.resize(N);
    aux_hat_.resize(N + 1);
    f_hat_.resize(N + 1);
    d_hat_.resize(N + 1);
    p_ = DGField(N, problem_.m, k_);
  }

  const ProblemSpec& problem() const { return problem_; }
  const Partition1D& partition() const { return part_; }
  int degree() const { return k_; }
  const FluxConfig& flux_config() const { return cfg_; }
  const BasisTable& basis() const { return bt_; }
  bool nonlinear_diffusion() const { return nonlinear_; }

  DGField make_field() const { return DGField(part_.n_cells(), problem_.m, k_); }

  /// Auxiliary variable p_h = B(u_h)(u_h)_x in the LDG sense.
  DGField compute_aux(const DGField& u, double t) const {
    check_shape(u);
    load_traces(u);
    build_aux(u, t);
    return p_;
  }

  /// The auxiliary field from the most recent rhs / compute_aux call.
  const DGField& last_aux() const { return p_; }

  DGField rhs(const DGField& u, double t) const {
    DGField out = make_field();
    rhs(u, t, out);
    return out;
  }

  void rhs(const DGField& u, double t, DGField& out) const {
    check_shape(u);
    if (!out.same_shape(u)) out = make_field();
    load_traces(u);
    build_aux(u, t);
    load_aux_traces();
    interface_fluxes(t);
    assemble(t, out);
  }

  /// Domain-end fluxes for non-periodic problems. The p_hat entry is only
  /// meaningful once p traces are known; pass a zero vector during the
  /// auxiliary stage.
  BoundaryFluxValues boundary_fluxes(bool left_end, const Vec& u_trace, const Vec& p_trace, double t) const {
    const auto& bc = problem_.bc;
    if (bc.kind == BoundaryKind::periodic) throw InputError("boundary fluxes requested on a periodic problem");
    BoundaryFluxValues b;
    if (left_end) {
      if (!bc.left) throw InputError("missing left boundary data");
      b.u_hat = bc.left(t);
      b.f_hat = problem_.f(b.u_hat);
      b.p_hat = p_trace;
      if (penalized_end(true)) b.p_hat += penalty_term(b.u_hat, u_trace, part_.width(0));
      return b;
    }
    b.f_hat = problem_.f(u_trace);
    if (bc.kind == BoundaryKind::dirichlet) {
      if (!bc.right) throw InputError("missing right boundary data");
      b.u_hat = bc.right(t);
      b.p_hat = p_trace;
      if (penalized_end(false)) b.p_hat += penalty_term(u_trace, b.u_hat, part_.width(part_.n_cells() - 1));
    } else {
      if (!bc.right_dx) throw InputError("missing right derivative data");
      b.u_hat = u_trace;
      b.p_hat = problem_.B(u_trace) * bc.right_dx(t);
    }
    return b;
  }

  /// True for the Dirichlet end that receives the penalty.
  bool penalized_end(bool left_end) const {
    if (opts_.dirichlet_penalty == 0.0 || problem_.bc.kind == BoundaryKind::periodic) return false;
    if (left_end) return cfg_.variant == FluxVariant::flux2;
    return cfg_.variant == FluxVariant::flux1 && problem_.bc.kind == BoundaryKind::dirichlet;
  }

 private:
  void check_shape(const DGField& u) const {
    if (u.n_cells() != part_.n_cells() || u.n_comp() != problem_.m || u.degree() != k_)
      throw InputError("field shape does not match the operator");
  }

  std::size_t nq() const { return bt_.rule.size(); }

  void load_traces(const DGField& u) const {
    const std::size_t N = part_.n_cells();
    const int m = problem_.m;
    const int nm = k_ + 1;
    for (std::size_t j = 0; j < N; ++j) {
      for (std::size_t q = 0; q < nq(); ++q) {
        Vec v = Vec::Zero(m);
        for (int i = 0; i < m; ++i)
          for (int l = 0; l < nm; ++l) v[i] += u(j, i, l) * bt_.P(q, l);
        uq_[j * nq() + q] = v;
      }
      u_left_[j] = u.left_trace(j);
      u_right_[j] = u.right_trace(j);
    }
  }

  void load_aux_traces() const {
    const std::size_t N = part_.n_cells();
    const int m = problem_.m;
    const int nm = k_ + 1;
    for (std::size_t j = 0; j < N; ++j) {
      for (std::size_t q = 0; q < nq(); ++q) {
        Vec v = Vec::Zero(m);
        for (int i = 0; i < m; ++i)
          for (int l = 0; l < nm; ++l) v[i] += p_(j, i, l) * bt_.P(q, l);
        pq_[j * nq() + q] = v;
      }
      p_left_[j] = p_.left_trace(j);
      p_right_[j] = p_.right_trace(j);
    }
  }

  // Traces either side of interface i (periodic wrap); boundary sides are
  // supplied by the caller.
  const Vec& minus_of(const std::vector<Vec>& right, std::size_t i) const {
    return right[i == 0 ? part_.n_cells() - 1 : i - 1];
  }
  const Vec& plus_of(const std::vector<Vec>& left, std::size_t i) const {
    return left[i == part_.n_cells() ? 0 : i];
  }

  Vec apply_B0(const Vec& v) const {
    if (B0_is_diag_) return B0_diag_.cwiseProduct(v);
    return B0_ * v;
  }

  // sigma [arg] / h with [.] = plus - minus across the domain end.
  Vec penalty_term(const Vec& minus, const Vec& plus, double h) const {
    return opts_.dirichlet_penalty / h * (aux_argument(plus) - aux_argument(minus));
  }

  Vec aux_argument(const Vec& u) const { return nonlinear_ ? problem_.g(u) : apply_B0(u); }

  void build_aux(const DGField& u, double t) const {
    (void)u;
    const std::size_t N = part_.n_cells();
    const int m = problem_.m;
    const double tu = cfg_.theta_u();
    const bool periodic = part_.periodic();
    for (std::size_t i = 0; i <= N; ++i) {
      if (periodic && i == N) {
        aux_hat_[N] = aux_hat_[0];
        continue;
      }
      if (!periodic && (i == 0 || i == N)) {
        const bool left = i == 0;
        const Vec& tr = left ? u_left_[0] : u_right_[N - 1];
        const BoundaryFluxValues b = boundary_fluxes(left, tr, Vec::Zero(m), t);
        aux_hat_[i] = aux_argument(b.u_hat);
        continue;
      }
      const Vec& um = minus_of(u_right_, i);
      const Vec& up = plus_of(u_left_, i);
      if (nonlinear_) {
        aux_hat_[i] = weighted_average(problem_.g(um), problem_.g(up), tu);
      } else {
        aux_hat_[i] = apply_B0(weighted_average(um, up, tu));
      }
    }
    const int nm = k_ + 1;
    for (std::size_t j = 0; j < N; ++j) {
      double vol[kMaxComponents * 8] = {};
      for (std::size_t q = 0; q < nq(); ++q) {
        const Vec arg = aux_argument(uq_[j * nq() + q]);
        for (int l = 0; l < nm; ++l) {
          const double wd = bt_.rule.weights[q] * bt_.dP(q, l);
          for (int i = 0; i < m; ++i) vol[i * nm + l] += wd * arg[i];
        }
      }
      const double h = part_.width(j);
      for (int i = 0; i < m; ++i)
        for (int l = 0; l < nm; ++l) {
          const double H = vol[i * nm + l] - aux_hat_[j + 1][i] + legendre_at_left(l) * aux_hat_[j][i];
          p_(j, i, l) = -(2 * l + 1) / h * H;
        }
    }
  }

  EigenDecomp interface_eig(const Vec& state, std::size_t i, double t) const {
    const Mat J = problem_.fprime(state);
    try {
      if (opts_.numeric_eig) return decompose_numeric(J);
      return decompose(J, problem_.hint(state));
    } catch (const DecompositionError& e) {
      throw DecompositionError(std::string(e.what()) + " at interface " + std::to_string(i) + ", t = " + std::to_string(t));
    }
  }

  Mat diffusion_hat_matrix(const Vec& um, const Vec& up) const {
    return b_hat_values(b_hat_mode_, um, up, problem_.g(um), problem_.g(up), problem_.B, cfg_.jump_floor);
  }

  void interface_fluxes(double t) const {
    const std::size_t N = part_.n_cells();
    const double th = cfg_.theta_f();
    const double tp = cfg_.theta_p();
    const bool periodic = part_.periodic();
    for (std::size_t i = 0; i <= N; ++i) {
      if (periodic && i == N) {
        f_hat_[N] = f_hat_[0];
        d_hat_[N] = d_hat_[0];
        continue;
      }
      if (!periodic && (i == 0 || i == N)) {
        const bool left = i == 0;
        const Vec& ut = left ? u_left_[0] : u_right_[N - 1];
        const Vec& pt = left ? p_left_[0] : p_right_[N - 1];
        const BoundaryFluxValues b = boundary_fluxes(left, ut, pt, t);
        f_hat_[i] = b.f_hat;
        if (!nonlinear_) {
          d_hat_[i] = apply_B0(b.p_hat);
        } else if (!left && problem_.bc.kind == BoundaryKind::mixed) {
          d_hat_[i] = problem_.B(ut) * b.p_hat;
        } else {
          // Secant between the boundary datum and the interior trace.
          d_hat_[i] = (left ? diffusion_hat_matrix(b.u_hat, ut) : diffusion_hat_matrix(ut, b.u_hat)) * b.p_hat;
        }
        continue;
      }
      const Vec& um = minus_of(u_right_, i);
      const Vec& up = plus_of(u_left_, i);
      const EigenDecomp eig = interface_eig(0.5 * (um + up), i, t);
      f_hat_[i] = convective_flux_values(problem_.f(um), problem_.f(up), eig, th);
      const Vec p_hat = weighted_average(minus_of(p_right_, i), plus_of(p_left_, i), tp);
      d_hat_[i] = nonlinear_ ? Vec(diffusion_hat_matrix(um, up) * p_hat) : apply_B0(p_hat);
    }
  }

  void assemble(double t, DGField& out) const {
    const std::size_t N = part_.n_cells();
    const int m = problem_.m;
    const int nm = k_ + 1;
    if (point_source_) point_source_(t, sq_);
    for (std::size_t j = 0; j < N; ++j) {
      double vol[kMaxComponents * 8] = {};
      double src[kMaxComponents * 8] = {};
      for (std::size_t q = 0; q < nq(); ++q) {
        const Vec& uq = uq_[j * nq() + q];
        const Vec& pq = pq_[j * nq() + q];
        const Vec diff = nonlinear_ ? Vec(problem_.B(uq) * pq) : apply_B0(pq);
        const Vec flux = problem_.f(uq) - diff;
        const Vec s = point_source_ ? sq_[j * nq() + q] : problem_.source(xq_[j * nq() + q], t);
        for (int l = 0; l < nm; ++l) {
          const double wd = bt_.rule.weights[q] * bt_.dP(q, l);
          const double wp = bt_.rule.weights[q] * bt_.P(q, l);
          for (int i = 0; i < m; ++i) {
            vol[i * nm + l] += wd * flux[i];
            src[i * nm + l] += wp * s[i];
          }
        }
      }
      const double h = part_.width(j);
      for (int i = 0; i < m; ++i)
        for (int l = 0; l < nm; ++l) {
          const double right = f_hat_[j + 1][i] - d_hat_[j + 1][i];
          const double left = f_hat_[j][i] - d_hat_[j][i];
          const double R = vol[i * nm + l] - right + legendre_at_left(l) * left;
          out(j, i, l) = (2 * l + 1) / h * R + 0.5 * (2 * l + 1) * src[i * nm + l];
        }
    }
  }

  ProblemSpec problem_;
  Partition1D part_;
  int k_;
  FluxConfig cfg_;
  OperatorOptions opts_;
  BasisTable bt_;
  bool nonlinear_ = false;
  BHatMode b_hat_mode_ = BHatMode::componentwise;
  Mat B0_;
  Vec B0_diag_;
  bool B0_is_diag_ = false;
  std::vector<double> xq_;
  PointSourceFn point_source_;

  // Workspace, rewritten on every evaluation.
  mutable std::vector<Vec> uq_, pq_, sq_;
  mutable std::vector<Vec> u_left_, u_right_, p_left_, p_right_;
  mutable std::vector<Vec> aux_hat_, f_hat_, d_hat_;
  mutable DGField p_;
};

}  // namespace ldg
