#pragma once

#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ldg/errors.hpp"
#include "ldg/field.hpp"
#include "ldg/fluxes.hpp"
#include "ldg/mesh.hpp"
#include "ldg/problems.hpp"
#include "ldg/projections.hpp"
#include "ldg/semidiscrete.hpp"
#include "ldg/timestep.hpp"

namespace ldg {

struct RunConfig {
  std::string mode = "convergence";
  std::string problem = "ex1_cubic";
  int degree = 1;
  std::vector<int> cells = {10, 20, 40, 80};
  std::vector<double> thetas = {1.0};
  std::optional<double> theta_convective;
  FluxVariant variant = FluxVariant::flux1;
  std::optional<BoundaryKind> boundary;
  std::optional<double> cfl;
  std::optional<double> dt_override;
  double t_end = 1.0;
  std::string output;
  double jump_floor = 1e-12;
  int quad_points = 0;
  int history_stride = 1;
  bool numeric_eig = false;
  BHatMode b_hat = BHatMode::automatic;
  double dirichlet_penalty = 1.0;
  std::vector<std::string> warnings;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

inline double parse_double(const std::string& v, const std::string& key, int line) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    if (!std::isfinite(d)) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("invalid number '" + v + "' for key '" + key + "'", line);
  }
}

inline int parse_int(const std::string& v, const std::string& key, int line) {
  try {
    std::size_t pos = 0;
    const long long n = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return static_cast<int>(n);
  } catch (const std::exception&) {
    throw ConfigError("invalid integer '" + v + "' for key '" + key + "'", line);
  }
}

}  // namespace detail

inline const std::vector<std::string>& run_modes() {
  static const std::vector<std::string> modes = {"run", "convergence", "projtest", "fluxtest", "history"};
  return modes;
}

inline BoundaryKind parse_boundary(const std::string& v) {
  if (v == "periodic") return BoundaryKind::periodic;
  if (v == "dirichlet") return BoundaryKind::dirichlet;
  if (v == "mixed") return BoundaryKind::mixed;
  throw InputError("unknown boundary kind '" + v + "'");
}

/// Line-based `key = value` text; `#` starts a comment.
inline RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::map<std::string, int> seen;
  std::stringstream ss(text);
  std::string raw;
  int line = 0;
  while (std::getline(ss, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
    const std::string key = detail::trim(body.substr(0, eq));
    const std::string val = detail::trim(body.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key", line);
    if (val.empty()) throw ConfigError("empty value for key '" + key + "'", line);
    if (seen.count(key)) throw ConfigError("duplicate key '" + key + "' (first on line " + std::to_string(seen[key]) + ")", line);
    seen[key] = line;

    if (key == "mode") {
      bool ok = false;
      for (const auto& m : run_modes()) ok = ok || m == val;
      if (!ok) throw ConfigError("unknown mode '" + val + "'", line);
      cfg.mode = val;
    } else if (key == "problem") {
      bool ok = false;
      for (const auto& id : builtin_ids()) ok = ok || id == val;
      if (!ok) throw ConfigError("unknown problem '" + val + "'", line);
      cfg.problem = val;
    } else if (key == "degree") {
      cfg.degree = detail::parse_int(val, key, line);
      if (cfg.degree < 0 || cfg.degree > 7) throw ConfigError("degree must be in 0..7", line);
    } else if (key == "cells") {
      cfg.cells.clear();
      for (const auto& item : detail::split_list(val)) {
        const int n = detail::parse_int(item, key, line);
        if (n <= 0) throw ConfigError("cell counts must be positive", line);
        if (!cfg.cells.empty() && n <= cfg.cells.back()) throw ConfigError("cell counts must be increasing", line);
        cfg.cells.push_back(n);
      }
    } else if (key == "theta") {
      cfg.thetas.clear();
      for (const auto& item : detail::split_list(val)) {
        const double th = detail::parse_double(item, key, line);
        if (th <= 0.0) throw ConfigError("theta must be positive", line);
        if (th <= 0.5 || th > 1.5)
          cfg.warnings.push_back("theta = " + item + " lies outside (1/2, 3/2]; no stability analysis covers it");
        cfg.thetas.push_back(th);
      }
    } else if (key == "theta_convective") {
      cfg.theta_convective = detail::parse_double(val, key, line);
      if (*cfg.theta_convective <= 0.0) throw ConfigError("theta_convective must be positive", line);
    } else if (key == "variant") {
      if (val == "flux1") cfg.variant = FluxVariant::flux1;
      else if (val == "flux2") cfg.variant = FluxVariant::flux2;
      else throw ConfigError("unknown flux variant '" + val + "'", line);
    } else if (key == "boundary") {
      try {
        cfg.boundary = parse_boundary(val);
      } catch (const InputError& e) {
        throw ConfigError(e.what(), line);
      }
    } else if (key == "cfl") {
      cfg.cfl = detail::parse_double(val, key, line);
      if (*cfg.cfl <= 0.0) throw ConfigError("cfl must be positive", line);
    } else if (key == "dt_override") {
      cfg.dt_override = detail::parse_double(val, key, line);
      if (*cfg.dt_override <= 0.0) throw ConfigError("dt_override must be positive", line);
    } else if (key == "t_end") {
      cfg.t_end = detail::parse_double(val, key, line);
      if (cfg.t_end <= 0.0) throw ConfigError("t_end must be positive", line);
    } else if (key == "output") {
      cfg.output = val;
    } else if (key == "jump_floor") {
      cfg.jump_floor = detail::parse_double(val, key, line);
      if (cfg.jump_floor < 0.0) throw ConfigError("jump_floor must be non-negative", line);
    } else if (key == "quad_points") {
      cfg.quad_points = detail::parse_int(val, key, line);
      if (cfg.quad_points < 0 || cfg.quad_points > 64) throw ConfigError("quad_points must be in 0..64", line);
    } else if (key == "history_stride") {
      cfg.history_stride = detail::parse_int(val, key, line);
      if (cfg.history_stride <= 0) throw ConfigError("history_stride must be positive", line);
    } else if (key == "eig") {
      if (val == "numeric") cfg.numeric_eig = true;
      else if (val == "auto" || val == "analytic") cfg.numeric_eig = false;
      else throw ConfigError("eig must be 'auto' or 'numeric'", line);
    } else if (key == "b_hat") {
      if (val == "auto") cfg.b_hat = BHatMode::automatic;
      else if (val == "rank_one") cfg.b_hat = BHatMode::rank_one;
      else if (val == "componentwise") cfg.b_hat = BHatMode::componentwise;
      else if (val == "secant_corrected") cfg.b_hat = BHatMode::secant_corrected;
      else throw ConfigError("unknown b_hat mode '" + val + "'", line);
    } else if (key == "dirichlet_penalty") {
      cfg.dirichlet_penalty = detail::parse_double(val, key, line);
      if (cfg.dirichlet_penalty < 0.0) throw ConfigError("dirichlet_penalty must be non-negative", line);
    } else {
      throw ConfigError("unknown key '" + key + "'", line);
    }
  }
  if (cfg.cells.empty()) throw ConfigError("cells must list at least one count", 0);
  if (cfg.thetas.empty()) throw ConfigError("theta must list at least one value", 0);
  return cfg;
}

/// CFL_k coefficients per problem (dt = CFL_k h^2), indexed by k = 0..4.
inline double default_cfl(const std::string& problem, int k) {
  static const std::map<std::string, std::vector<double>> table = {
      {"ex1_cubic", {0.005, 0.005, 0.005, 0.002, 0.001}},
      {"ex1_convdom", {0.6, 0.01, 0.01, 0.002, 0.002}},
      {"ex1_aniso", {0.0001, 0.0001, 0.00008, 0.00002, 0.00001}},
      {"ex3_longtime", {0.005, 0.005, 0.005, 0.002, 0.001}},
      {"ex4_mixed", {0.005, 0.005, 0.005, 0.003, 0.002}},
      {"ex4_dirichlet", {0.005, 0.005, 0.005, 0.003, 0.0005}},
      {"ex5_nonlindiff", {0.005, 0.005, 0.005, 0.0005, 0.0001}},
      {"ex6_buckley", {0.05, 0.05, 0.01, 0.002, 0.001}},
  };
  const auto it = table.find(problem);
  const std::vector<double>& col = it == table.end() ? table.at("ex1_cubic") : it->second;
  if (k < 0) throw InputError("negative degree");
  // Degrees past the table reuse the last entry scaled down per degree.
  if (k < static_cast<int>(col.size())) return col[static_cast<std::size_t>(k)];
  return col.back() * std::pow(0.5, k - static_cast<int>(col.size()) + 1);
}

inline double effective_cfl(const RunConfig& cfg) { return cfg.cfl ? *cfg.cfl : default_cfl(cfg.problem, cfg.degree); }

/// The problem selected by the config. A boundary key picks the matching
/// Example-4 variant and must agree with every other problem's own boundary.
inline ProblemSpec resolve_problem(const RunConfig& cfg) {
  std::string id = cfg.problem;
  if (cfg.boundary && id.rfind("ex4_", 0) == 0) {
    if (*cfg.boundary == BoundaryKind::mixed) id = "ex4_mixed";
    else if (*cfg.boundary == BoundaryKind::dirichlet) id = "ex4_dirichlet";
  }
  ProblemSpec p = builtin(id);
  if (cfg.boundary && *cfg.boundary != p.bc.kind)
    throw InputError("problem '" + cfg.problem + "' does not support boundary '" + to_string(*cfg.boundary) + "'");
  return p;
}

inline FluxConfig flux_config(const RunConfig& cfg, double theta) {
  FluxConfig fc;
  fc.theta = theta;
  fc.variant = cfg.variant;
  fc.jump_floor = cfg.jump_floor;
  fc.b_hat = cfg.b_hat;
  fc.theta_convective = cfg.theta_convective;
  return fc;
}

inline OperatorOptions operator_options(const RunConfig& cfg) {
  OperatorOptions o;
  o.quad_points = cfg.quad_points;
  o.numeric_eig = cfg.numeric_eig;
  o.dirichlet_penalty = cfg.dirichlet_penalty;
  return o;
}

inline TimeControl time_control(const RunConfig& cfg) {
  TimeControl tc;
  tc.cfl = effective_cfl(cfg);
  tc.t_end = cfg.t_end;
  tc.dt_override = cfg.dt_override;
  return tc;
}

inline Partition1D problem_mesh(const ProblemSpec& p, int n) { return build_uniform(p.x_lo, p.x_hi, n, p.periodic()); }

/// L2 error at time t with k+3 Gauss points per cell.
inline double exact_error(const DGField& uh, const ProblemSpec& p, const Partition1D& part, double t) {
  if (!p.exact) throw InputError("problem '" + p.id + "' has no exact solution");
  const SpaceTimeFn& ex = *p.exact;
  return l2_error(uh, [&](double x) { return ex(x, t); }, part, uh.degree() + 3);
}

struct RunResult {
  Partition1D partition;
  DGField u;
  double t = 0.0;
  std::size_t steps = 0;
};

/// Projects the initial data, integrates to t_end, optionally reporting each step.
inline RunResult run_single(const RunConfig& cfg, const ProblemSpec& p, int n, double theta,
                            const StepCallback& callback = {}) {
  Partition1D part = problem_mesh(p, n);
  SemiDiscreteOp op(p, part, cfg.degree, flux_config(cfg, theta), operator_options(cfg));
  const DGField u0 = l2_project(p.initial, part, cfg.degree);
  if (callback) callback(0, 0.0, u0);
  IntegrationResult r = integrate(op, u0, time_control(cfg), callback);
  return {std::move(part), std::move(r.u), r.t, r.steps};
}

struct ConvergenceRow {
  int k = 0;
  double theta = 1.0;
  int N = 0;
  double error = 0.0;
  std::optional<double> order;  // log2 ratio against the previous N
};

inline std::optional<double> observed_order(double e_coarse, double e_fine, int n_coarse, int n_fine) {
  if (!(e_coarse > 0.0) || !(e_fine > 0.0)) return std::nullopt;
  return std::log(e_coarse / e_fine) / std::log(static_cast<double>(n_fine) / n_coarse);
}

inline void fill_orders(std::vector<ConvergenceRow>& rows) {
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].theta == rows[i - 1].theta && rows[i].k == rows[i - 1].k)
      rows[i].order = observed_order(rows[i - 1].error, rows[i].error, rows[i - 1].N, rows[i].N);
}

inline std::vector<ConvergenceRow> run_convergence(const RunConfig& cfg) {
  const ProblemSpec p = resolve_problem(cfg);
  if (!p.exact) throw InputError("problem '" + p.id + "' has no exact solution");
  std::vector<ConvergenceRow> rows;
  for (double theta : cfg.thetas)
    for (int n : cfg.cells) {
      const RunResult r = run_single(cfg, p, n, theta);
      rows.push_back({cfg.degree, theta, n, exact_error(r.u, p, r.partition, r.t), std::nullopt});
    }
  fill_orders(rows);
  return rows;
}

struct HistoryRow {
  double theta = 1.0;
  double t = 0.0;
  double error = 0.0;
};

/// Error against the exact solution every history_stride steps (plus t = 0
/// and t_end), on the first cell count of the ladder.
inline std::vector<HistoryRow> run_history(const RunConfig& cfg) {
  const ProblemSpec p = resolve_problem(cfg);
  if (!p.exact) throw InputError("problem '" + p.id + "' has no exact solution");
  std::vector<HistoryRow> rows;
  const int n = cfg.cells.front();
  const Partition1D part = problem_mesh(p, n);
  const TimeControl tc = time_control(cfg);
  const double dt = tc.dt_override ? *tc.dt_override : tc.cfl * part.h_max() * part.h_max();
  const auto n_steps = static_cast<std::size_t>(std::max(1.0, std::ceil(tc.t_end / dt - 1e-9)));
  const auto stride = static_cast<std::size_t>(cfg.history_stride);
  for (double theta : cfg.thetas) {
    run_single(cfg, p, n, theta, [&](std::size_t step, double t, const DGField& u) {
      if (step % stride == 0 || step == n_steps) rows.push_back({theta, t, exact_error(u, p, part, t)});
    });
  }
  return rows;
}

struct SnapshotRow {
  double x = 0.0;
  Vec u;
};

/// u_h sampled at 10 uniformly spaced points per cell (cell interiors,
/// spacing h/10, offset h/20).
inline std::vector<SnapshotRow> sample_field(const DGField& u, const Partition1D& part, int per_cell = 10) {
  std::vector<SnapshotRow> rows;
  for (std::size_t j = 0; j < u.n_cells(); ++j)
    for (int q = 0; q < per_cell; ++q) {
      const double s = -1.0 + (2.0 * q + 1.0) / per_cell;
      rows.push_back({part.to_physical(j, s), u.eval(j, s)});
    }
  return rows;
}

/// Integrates the first (theta, N) of the config to t_end and samples it.
inline std::vector<SnapshotRow> run_snapshot(const RunConfig& cfg) {
  const ProblemSpec p = resolve_problem(cfg);
  const RunResult r = run_single(cfg, p, cfg.cells.front(), cfg.thetas.front());
  return sample_field(r.u, r.partition);
}

struct StudyRow {
  std::string kind;
  int k = 0;
  double theta = 1.0;
  int N = 0;
  double error = 0.0;
  std::optional<double> order;
};

inline void fill_orders(std::vector<StudyRow>& rows) {
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].kind == rows[i - 1].kind && rows[i].theta == rows[i - 1].theta && rows[i].k == rows[i - 1].k)
      rows[i].order = observed_order(rows[i - 1].error, rows[i].error, rows[i - 1].N, rows[i].N);
}

/// Projection errors of the problem's exact data at t = 0 under refinement:
/// scalar GGR of the first component (both sides), vector GGR of u, the
/// modified projection of p = A^{1/2} u_x, and the L2 projection of u.
inline std::vector<StudyRow> run_projtest(const RunConfig& cfg) {
  const ProblemSpec p = resolve_problem(cfg);
  if (!p.periodic() || !p.exact || !p.exact_dx) throw InputError("projtest needs a periodic problem with exact data");
  const int k = cfg.degree;
  const SpaceTimeFn ex = *p.exact;
  const SpaceTimeFn exdx = *p.exact_dx;
  const Mat sqrtA = p.B(Vec::Zero(p.m));
  const std::function<Vec(double)> u = [&](double x) { return ex(x, 0.0); };
  const std::function<Vec(double)> pf = [&](double x) { return Vec(sqrtA * exdx(x, 0.0)); };
  const std::function<Vec(double)> z1 = [&](double x) { return Vec::Constant(1, ex(x, 0.0)[0]); };
  std::vector<StudyRow> rows;
  for (const std::string kind : {"l2", "ggr_plus", "ggr_minus", "ggr_vector", "modified_p"})
    for (double theta : cfg.thetas)
      for (int n : cfg.cells) {
        const Partition1D part = problem_mesh(p, n);
        double err = 0.0;
        const int nq = k + 3;
        if (kind == "l2") {
          err = l2_error(l2_project(u, part, k), u, part, nq);
        } else if (kind == "ggr_plus" || kind == "ggr_minus") {
          const GGRSide side = kind == "ggr_plus" ? GGRSide::plus : GGRSide::minus;
          const DGField pz = ggr_scalar([&](double x) { return ex(x, 0.0)[0]; }, part, k, theta, side);
          err = l2_error(pz, z1, part, nq);
        } else if (kind == "ggr_vector") {
          err = l2_error(ggr_vector(u, part, k, theta, interface_eigs(p, u, part)), u, part, nq);
        } else {
          const ModifiedProjection mp = modified_projection_p(pf, u, p, part, k, theta, interface_eigs(p, u, part));
          err = l2_error(mp.field, pf, part, nq);
        }
        rows.push_back({kind, k, theta, n, err, std::nullopt});
      }
  fill_orders(rows);
  return rows;
}

/// Interface flux consistency on the L2 projection of the exact data at
/// t = 0: max over interior interfaces of |f_hat - f(u)|, |g_hat - g(u)| and
/// |B_hat - B(u)| (Frobenius), with u the exact interface value.
inline std::vector<StudyRow> run_fluxtest(const RunConfig& cfg) {
  const ProblemSpec p = resolve_problem(cfg);
  if (!p.exact) throw InputError("fluxtest needs a problem with an exact solution");
  const int k = cfg.degree;
  const SpaceTimeFn ex = *p.exact;
  const std::function<Vec(double)> u = [&](double x) { return ex(x, 0.0); };
  const BHatMode mode = resolve_b_hat_mode(cfg.b_hat, p.diagonal_diffusion);
  std::vector<StudyRow> rows;
  for (const std::string kind : {"f_hat", "g_hat", "b_hat"})
    for (double theta : cfg.thetas)
      for (int n : cfg.cells) {
        const Partition1D part = problem_mesh(p, n);
        const DGField uh = l2_project(u, part, k);
        double err = 0.0;
        for (std::size_t i = 1; i < part.n_cells(); ++i) {
          const TracePair tr = interface_traces(uh, i, part);
          const Vec ue = u(part.node(i));
          double e = 0.0;
          if (kind == "f_hat") {
            const Vec avg = tr.average();
            const EigenDecomp eig = cfg.numeric_eig ? decompose_numeric(p.fprime(avg)) : decompose(p.fprime(avg), p.hint(avg));
            e = (convective_flux(tr, p.f, eig, theta) - p.f(ue)).norm();
          } else if (kind == "g_hat") {
            e = (g_hat(tr, p.g, theta) - p.g(ue)).norm();
          } else {
            e = (B_hat(tr, p.g, p.B, cfg.jump_floor, mode) - p.B(ue)).norm();
          }
          err = std::max(err, e);
        }
        rows.push_back({kind, k, theta, n, err, std::nullopt});
      }
  fill_orders(rows);
  return rows;
}

// CSV writers: scientific notation with 6 significant digits, '\n' endings.

inline std::string fmt_sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5e", v);
  return buf;
}

inline std::string fmt_opt(const std::optional<double>& v) { return v ? fmt_sci(*v) : ""; }

inline void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows) {
  os << "k,theta,N,error,order\n";
  for (const auto& r : rows)
    os << r.k << ',' << fmt_sci(r.theta) << ',' << r.N << ',' << fmt_sci(r.error) << ',' << fmt_opt(r.order) << '\n';
}

inline void write_history_csv(std::ostream& os, const std::vector<HistoryRow>& rows) {
  os << "theta,t,error\n";
  for (const auto& r : rows) os << fmt_sci(r.theta) << ',' << fmt_sci(r.t) << ',' << fmt_sci(r.error) << '\n';
}

inline void write_snapshot_csv(std::ostream& os, const std::vector<SnapshotRow>& rows) {
  const int m = rows.empty() ? 0 : static_cast<int>(rows.front().u.size());
  os << 'x';
  for (int i = 0; i < m; ++i) os << ",u" << (i + 1);
  os << '\n';
  for (const auto& r : rows) {
    os << fmt_sci(r.x);
    for (int i = 0; i < m; ++i) os << ',' << fmt_sci(r.u[i]);
    os << '\n';
  }
}

inline void write_study_csv(std::ostream& os, const std::vector<StudyRow>& rows) {
  os << "kind,k,theta,N,error,order\n";
  for (const auto& r : rows)
    os << r.kind << ',' << r.k << ',' << fmt_sci(r.theta) << ',' << r.N << ',' << fmt_sci(r.error) << ','
       << fmt_opt(r.order) << '\n';
}

/// Runs the configured mode and writes its CSV.
inline void run_mode(const RunConfig& cfg, std::ostream& os) {
  if (cfg.mode == "convergence") write_convergence_csv(os, run_convergence(cfg));
  else if (cfg.mode == "history") write_history_csv(os, run_history(cfg));
  else if (cfg.mode == "run") write_snapshot_csv(os, run_snapshot(cfg));
  else if (cfg.mode == "projtest") write_study_csv(os, run_projtest(cfg));
  else if (cfg.mode == "fluxtest") write_study_csv(os, run_fluxtest(cfg));
  else throw InputError("unknown mode '" + cfg.mode + "'");
}

}  // namespace ldg
