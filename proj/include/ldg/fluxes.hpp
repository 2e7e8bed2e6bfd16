#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include "ldg/errors.hpp"
#include "ldg/field.hpp"
#include "ldg/problems.hpp"
#include "ldg/smalleig.hpp"
#include "ldg/types.hpp"

namespace ldg {

/// flux1: u_hat = u^(theta), p_hat = p^(1-theta); flux2 swaps the weights.
enum class FluxVariant { flux1, flux2 };

/// How the diffusion-coefficient flux B_hat is formed from the traces.
enum class BHatMode {
  automatic,      // componentwise for diagonal B, secant_corrected otherwise
  rank_one,       // [g][u]^T / |[u]|^2
  componentwise,  // diag([g_i] / [u_i])
  secant_corrected,  // B({u}) + ([g] - B({u})[u]) [u]^T / |[u]|^2
};

struct FluxConfig {
  double theta = 1.0;
  FluxVariant variant = FluxVariant::flux1;
  double jump_floor = 1e-12;
  BHatMode b_hat = BHatMode::automatic;
  std::optional<double> theta_convective;  // unset: the convective flux uses theta too

  double theta_bar() const { return 1.0 - theta; }
  double theta_f() const { return theta_convective ? *theta_convective : theta; }
  /// Weight of the u-trace average in the auxiliary equation.
  double theta_u() const { return variant == FluxVariant::flux1 ? theta : 1.0 - theta; }
  /// Weight of the p-trace average in the evolution equation.
  double theta_p() const { return variant == FluxVariant::flux1 ? 1.0 - theta : theta; }
};

/// theta * minus + (1 - theta) * plus
template <typename V>
inline V weighted_average(const V& minus, const V& plus, double theta) {
  return theta * minus + (1.0 - theta) * plus;
}

/// Characteristic upwind-biased flux from the physical flux values f(u-)
/// and f(u+): each characteristic component is biased toward the upwind
/// side by theta according to the sign of its eigenvalue (lambda = 0 counts
/// as non-negative), then mapped back through R.
inline Vec convective_flux_values(const Vec& f_minus, const Vec& f_plus, const EigenDecomp& eig, double theta) {
  const Vec z_minus = eig.L * f_minus;
  const Vec z_plus = eig.L * f_plus;
  Vec z_hat(z_minus.size());
  const double tb = 1.0 - theta;
  for (int i = 0; i < z_hat.size(); ++i) {
    z_hat[i] = eig.lambda[i] >= 0.0 ? theta * z_minus[i] + tb * z_plus[i] : tb * z_minus[i] + theta * z_plus[i];
  }
  return eig.R * z_hat;
}

inline Vec convective_flux(const TracePair& u, const StateFn& f, const EigenDecomp& eig, double theta) {
  return convective_flux_values(f(u.minus()), f(u.plus()), eig, theta);
}

struct DiffusiveFluxes {
  Vec u_hat;
  Vec p_hat;
};

inline DiffusiveFluxes diffusive_fluxes(const TracePair& u, const TracePair& p, const FluxConfig& cfg) {
  return {weighted_average(u.minus(), u.plus(), cfg.theta_u()), weighted_average(p.minus(), p.plus(), cfg.theta_p())};
}

/// g^(theta)(u_h) = theta g(u-) + (1 - theta) g(u+)
inline Vec g_hat(const TracePair& u, const StateFn& g, double theta) {
  return weighted_average(g(u.minus()), g(u.plus()), theta);
}

/// [g][u]^T / |[u]|^2, with B({u}) below the jump floor.
inline Mat b_hat_rank_one(const Vec& u_minus, const Vec& u_plus, const Vec& g_minus, const Vec& g_plus,
                          const MatrixFn& B, double jump_floor) {
  const Vec du = u_plus - u_minus;
  const double n2 = du.squaredNorm();
  if (std::sqrt(n2) < jump_floor) return B(0.5 * (u_minus + u_plus));
  return (g_plus - g_minus) * du.transpose() / n2;
}

/// diag([g_i] / [u_i]) per component, B_ii({u}) where |[u_i]| is below the floor.
inline Mat b_hat_componentwise(const Vec& u_minus, const Vec& u_plus, const Vec& g_minus, const Vec& g_plus,
                               const MatrixFn& B, double jump_floor) {
  const int m = static_cast<int>(u_minus.size());
  Mat out = Mat::Zero(m, m);
  bool need_fallback = false;
  for (int i = 0; i < m; ++i) {
    const double du = u_plus[i] - u_minus[i];
    if (std::abs(du) < jump_floor) {
      need_fallback = true;
    } else {
      out(i, i) = (g_plus[i] - g_minus[i]) / du;
    }
  }
  if (need_fallback) {
    const Mat Bavg = B(0.5 * (u_minus + u_plus));
    for (int i = 0; i < m; ++i)
      if (std::abs(u_plus[i] - u_minus[i]) < jump_floor) out(i, i) = Bavg(i, i);
  }
  return out;
}

/// Rank-one secant update of B({u}); satisfies B_hat [u] = [g] and equals B
/// whenever g is linear.
inline Mat b_hat_secant_corrected(const Vec& u_minus, const Vec& u_plus, const Vec& g_minus, const Vec& g_plus,
                                  const MatrixFn& B, double jump_floor) {
  const Mat Bavg = B(0.5 * (u_minus + u_plus));
  const Vec du = u_plus - u_minus;
  const double n2 = du.squaredNorm();
  if (std::sqrt(n2) < jump_floor) return Bavg;
  const Vec resid = (g_plus - g_minus) - Bavg * du;
  return Bavg + resid * du.transpose() / n2;
}

inline BHatMode resolve_b_hat_mode(BHatMode mode, bool diagonal_diffusion) {
  if (mode != BHatMode::automatic) return mode;
  return diagonal_diffusion ? BHatMode::componentwise : BHatMode::secant_corrected;
}

inline Mat b_hat_values(BHatMode mode, const Vec& u_minus, const Vec& u_plus, const Vec& g_minus, const Vec& g_plus,
                        const MatrixFn& B, double jump_floor) {
  switch (mode) {
    case BHatMode::rank_one: return b_hat_rank_one(u_minus, u_plus, g_minus, g_plus, B, jump_floor);
    case BHatMode::componentwise: return b_hat_componentwise(u_minus, u_plus, g_minus, g_plus, B, jump_floor);
    case BHatMode::secant_corrected:
    case BHatMode::automatic: return b_hat_secant_corrected(u_minus, u_plus, g_minus, g_plus, B, jump_floor);
  }
  return b_hat_secant_corrected(u_minus, u_plus, g_minus, g_plus, B, jump_floor);
}

/// B_hat from a trace pair; rank_one reproduces [g(u_h)][u_h]^T / |[u_h]|^2 literally.
inline Mat B_hat(const TracePair& u, const StateFn& g, const MatrixFn& B, double jump_floor,
                 BHatMode mode = BHatMode::rank_one) {
  return b_hat_values(mode, u.minus(), u.plus(), g(u.minus()), g(u.plus()), B, jump_floor);
}

inline std::string to_string(FluxVariant v) { return v == FluxVariant::flux1 ? "flux1" : "flux2"; }

inline std::string to_string(BHatMode m) {
  switch (m) {
    case BHatMode::automatic: return "auto";
    case BHatMode::rank_one: return "rank_one";
    case BHatMode::componentwise: return "componentwise";
    case BHatMode::secant_corrected: return "secant_corrected";
  }
  return "?";
}

}  // namespace ldg
