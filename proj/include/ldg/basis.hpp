#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "ldg/errors.hpp"

namespace ldg {

/// P_ell(s) by the three-term recurrence.
inline double legendre_eval(int ell, double s) {
  if (ell == 0) return 1.0;
  double p_prev = 1.0;
  double p = s;
  for (int n = 1; n < ell; ++n) {
    const double p_next = ((2 * n + 1) * s * p - n * p_prev) / (n + 1);
    p_prev = p;
    p = p_next;
  }
  return p;
}

/// dP_ell/ds via P'_{n+1} = P'_{n-1} + (2n+1) P_n.
inline double legendre_deriv(int ell, double s) {
  if (ell == 0) return 0.0;
  double d_prev = 0.0;  // P'_0
  double d = 1.0;       // P'_1
  double p_prev = 1.0;  // P_0
  double p = s;         // P_1
  for (int n = 1; n < ell; ++n) {
    const double d_next = d_prev + (2 * n + 1) * p;
    const double p_next = ((2 * n + 1) * s * p - n * p_prev) / (n + 1);
    d_prev = d;
    d = d_next;
    p_prev = p;
    p = p_next;
  }
  return d;
}

/// Endpoint values P_ell(+1) = 1, P_ell(-1) = (-1)^ell.
inline double legendre_at_right(int /*ell*/) { return 1.0; }
inline double legendre_at_left(int ell) { return (ell % 2 == 0) ? 1.0 : -1.0; }

struct QuadRule {
  std::vector<double> points;
  std::vector<double> weights;
  std::size_t size() const { return points.size(); }
};

/// Gauss-Legendre rule on [-1, 1] with n points (1 <= n <= 64).
inline QuadRule quad_rule(int n) {
  if (n < 1 || n > 64) throw InputError("unsupported quadrature size " + std::to_string(n));
  QuadRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Chebyshev-like initial guess, descending roots.
    double s = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      const double p = legendre_eval(n, s);
      dp = legendre_deriv(n, s);
      const double ds = p / dp;
      s -= ds;
      if (std::abs(ds) < 1e-16) break;
    }
    dp = legendre_deriv(n, s);
    const double w = 2.0 / ((1.0 - s * s) * dp * dp);
    rule.points[i] = -s;
    rule.points[n - 1 - i] = s;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.points[n / 2] = 0.0;
  return rule;
}

/// Tabulated basis values at the rule's points, shared by every assembly loop.
struct BasisTable {
  int degree = 0;
  QuadRule rule;
  std::vector<double> value;  // value[q * (k+1) + ell]
  std::vector<double> deriv;  // dP/ds at the same layout

  BasisTable() = default;
  BasisTable(int k, QuadRule r) : degree(k), rule(std::move(r)) {
    const int nm = k + 1;
    value.resize(rule.size() * nm);
    deriv.resize(rule.size() * nm);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      for (int l = 0; l < nm; ++l) {
        value[q * nm + l] = legendre_eval(l, rule.points[q]);
        deriv[q * nm + l] = legendre_deriv(l, rule.points[q]);
      }
    }
  }
  int n_modes() const { return degree + 1; }
  double P(std::size_t q, int l) const { return value[q * n_modes() + l]; }
  double dP(std::size_t q, int l) const { return deriv[q * n_modes() + l]; }
};

}  // namespace ldg
