#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>

#include "ldg/errors.hpp"
#include "ldg/field.hpp"

namespace ldg {

struct TimeControl {
  double cfl = 0.005;
  double t_end = 1.0;
  std::optional<double> dt_override;
};

namespace detail {

inline void check_stage(const DGField& u, double t) {
  if (!u.all_finite()) throw BlowUpError("non-finite state", t, u.max_abs());
}

}  // namespace detail

/// One Shu-Osher SSP-RK3 step. Op needs rhs(const DGField&, double, DGField&).
/// Written in increment form, u + dt (L0 + L1 + 4 L2) / 6, which equals the
/// convex-combination form and leaves u bit-identical when L vanishes.
template <typename Op>
DGField ssp_rk3_step(const Op& op, const DGField& u, double t, double dt) {
  if (!(dt > 0.0)) throw InputError("time step must be positive");
  DGField L0(u.n_cells(), u.n_comp(), u.degree());
  DGField L1 = L0, L2 = L0;
  const std::size_t n = u.size();
  const auto& ud = u.data();

  DGField u1 = u;
  op.rhs(u, t, L0);
  for (std::size_t i = 0; i < n; ++i) u1.data()[i] = ud[i] + dt * L0.data()[i];
  detail::check_stage(u1, t + dt);

  DGField u2 = u;
  op.rhs(u1, t + dt, L1);
  for (std::size_t i = 0; i < n; ++i) u2.data()[i] = ud[i] + 0.25 * dt * (L0.data()[i] + L1.data()[i]);
  detail::check_stage(u2, t + 0.5 * dt);

  DGField out = u;
  op.rhs(u2, t + 0.5 * dt, L2);
  for (std::size_t i = 0; i < n; ++i)
    out.data()[i] = ud[i] + dt * ((L0.data()[i] + L1.data()[i]) / 6.0 + 2.0 / 3.0 * L2.data()[i]);
  detail::check_stage(out, t + dt);
  return out;
}

struct IntegrationResult {
  DGField u;
  double t = 0.0;
  std::size_t steps = 0;
  bool clipped = false;  // final step shortened to hit t_end
};

/// Called after every accepted step with (step index starting at 1, t, u).
using StepCallback = std::function<void(std::size_t, double, const DGField&)>;

/// dt = cfl * h_max^2 unless overridden; the last step is clipped onto t_end.
template <typename Op>
IntegrationResult integrate(const Op& op, const DGField& u0, const TimeControl& control, double h_max,
                            const StepCallback& callback = {}) {
  if (!(control.t_end > 0.0)) throw InputError("t_end must be positive");
  const double dt = control.dt_override ? *control.dt_override : control.cfl * h_max * h_max;
  if (!(dt > 0.0)) throw InputError("time step must be positive");
  IntegrationResult r{u0, 0.0, 0, false};
  // Step times are n * dt, so long runs do not accumulate round-off in t.
  const double ratio = control.t_end / dt;
  auto n_steps = static_cast<std::size_t>(std::ceil(ratio - 1e-9));
  if (n_steps == 0) n_steps = 1;
  for (std::size_t n = 0; n < n_steps; ++n) {
    const double t0 = static_cast<double>(n) * dt;
    const bool last = n + 1 == n_steps;
    const double t1 = last ? control.t_end : static_cast<double>(n + 1) * dt;
    if (last && t1 - t0 < dt * (1.0 - 1e-9)) r.clipped = true;
    r.u = ssp_rk3_step(op, r.u, t0, t1 - t0);
    r.steps = n + 1;
    r.t = t1;
    if (callback) callback(r.steps, r.t, r.u);
  }
  return r;
}

template <typename Op>
IntegrationResult integrate(const Op& op, const DGField& u0, const TimeControl& control,
                            const StepCallback& callback = {}) {
  return integrate(op, u0, control, op.partition().h_max(), callback);
}

}  // namespace ldg
