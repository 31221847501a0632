#pragma once

#include <cmath>
#include <stdexcept>

#include "ppmlink/special_functions.hpp"

// Closed-form results: optimal PPM orders, PIE functions, asymptotic
// expansions and the lossy-bosonic capacity reference curve.
// All PIE values are in bits per photon.

namespace ppmlink {

inline constexpr double kE = 2.718281828459045235360287471352662;
inline constexpr double kTwoE = 2.0 * kE;

/// Background-to-signal ratio r = n_b/n_a.
struct NoiseRatio {
  double r = 0.0;

  explicit NoiseRatio(double r_) : r(r_) {
    if (!std::isfinite(r) || r < 0.0) detail::domain_fail("NoiseRatio", r, "must be finite and >= 0");
  }
};

/// Noise correction factor gamma = 1 + 2 n_b / n_a, gamma >= 1.
struct GammaFactor {
  double gamma = 1.0;

  explicit GammaFactor(double gamma_) : gamma(gamma_) {
    if (!std::isfinite(gamma) || gamma < 1.0)
      detail::domain_fail("GammaFactor", gamma, "must be finite and >= 1");
  }
  static GammaFactor from_ratio(NoiseRatio r) { return GammaFactor(1.0 + 2.0 * r.r); }
};

/// Continuous optimal PPM order without noise: M* = (2/n_a) / W(2e/n_a).
/// In the paper's regime (n_a <= 1e-2) the result is well above 2; for
/// larger n_a the caller should check the >= 2 expectation itself.
inline double opt_order_noiseless(double na) {
  if (!(na > 0.0 && na < 1.0)) detail::domain_fail("opt_order_noiseless", na, "must lie in (0,1)");
  return 2.0 / na / lambert_w0(kTwoE / na);
}

/// Noisy optimum: M* = (2/(gamma n_a)) / W(2e/(gamma n_a)).
/// Reduces to opt_order_noiseless at gamma = 1.
inline double opt_order_noisy(double na, GammaFactor gamma) {
  const double x = gamma.gamma * na;
  if (!(na > 0.0 && x < 1.0)) detail::domain_fail("opt_order_noisy", x, "gamma*n_a must lie in (0,1)");
  return 2.0 / x / lambert_w0(kTwoE / x);
}

/// PIE of optimized noiseless PPM:
///   Pi(nu) = { W(2e/nu) - 2 + 1/W(2e/nu) } * log2 e,  0 < nu < 2e.
/// Strictly decreasing in nu.
inline double pie_function_Pi(double nu) {
  if (!(nu > 0.0 && nu < kTwoE)) detail::domain_fail("pie_function_Pi", nu, "must lie in (0, 2e)");
  const double w = lambert_w0(kTwoE / nu);
  return (w - 2.0 + 1.0 / w) * kLog2E;
}

/// Three-term small-n_a expansion of Pi:
///   log2(1/n_a) - log2 log(2e/n_a) - log2(e/2).
inline double pie_expansion_Pi(double na) {
  if (!(na > 0.0 && na < 2.0)) detail::domain_fail("pie_expansion_Pi", na, "must lie in (0,2)");
  return -std::log2(na) - std::log2(std::log(kTwoE / na)) - std::log2(kE / 2.0);
}

/// Exact capacity bound per photon: g(n_a)/n_a = (1 + 1/n_a) log2(1+n_a) - log2 n_a.
inline double capacity_pie_bound(double na) {
  if (!(na > 0.0)) detail::domain_fail("capacity_pie_bound", na, "must be > 0");
  return noise_penalty_g(na) / na;
}

/// Two-term small-n_a expansion of the capacity bound: log2(1/n_a) + log2 e.
inline double capacity_pie_expansion(double na) {
  if (!(na > 0.0)) detail::domain_fail("capacity_pie_expansion", na, "must be > 0");
  return -std::log2(na) + kLog2E;
}

/// Optimized noisy OOK: PIE = Pi(n_a) - g(n_b/n_a).
inline double pie_ook_noisy(double na, NoiseRatio r) {
  return pie_function_Pi(na) - noise_penalty_g(r.r);
}

/// Optimized noisy PPM with the simple-decision receiver:
///   PIE = Pi(n_a + 2 n_b) - g(n_b/n_a).
/// The analytic PPM-OOK gap Pi(n_a) - Pi(n_a + 2 n_b) tends to
/// log2(1 + 2 n_b/n_a) as n_a -> 0 at fixed ratio.
inline double pie_ppm_noisy(double na, double nb) {
  if (!(na > 0.0)) detail::domain_fail("pie_ppm_noisy", na, "n_a must be > 0");
  if (!(nb >= 0.0)) detail::domain_fail("pie_ppm_noisy", nb, "n_b must be >= 0");
  return pie_function_Pi(na + 2.0 * nb) - noise_penalty_g(nb / na);
}

/// Optimal pulse energy in photons, M* n_a ~ 2 / log(2e/n_a).
/// Satisfies n_a << M* n_a << 1 in the asymptotic regime.
inline double mean_pulse_photons_asymptotic(double na) {
  if (!(na > 0.0 && na < 2.0)) detail::domain_fail("mean_pulse_photons_asymptotic", na, "must lie in (0,2)");
  return 2.0 / std::log(kTwoE / na);
}

/// Second-order click-probability expansion u + c*u^2 with an explicit
/// signed quadratic coefficient c. The true Taylor expansion of the
/// exclusive-click probability carries c = -gamma/2 with
/// gamma = 1 + 2 n_b/n_a (c = -1/2 in the noiseless case).
inline double click_prob_quadratic(double m_na, double quad_coeff) {
  if (!(m_na >= 0.0)) detail::domain_fail("click_prob_quadratic", m_na, "must be >= 0");
  return m_na + quad_coeff * m_na * m_na;
}

}  // namespace ppmlink
