#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "ppmlink/special_functions.hpp"

// Exact detection probabilities and mutual information for the four channel
// scenarios: PPM/OOK x noiseless/noisy. All rates are in bits per time bin.

namespace ppmlink {

/// Operating point: mean signal photons (n_a) and mean background counts
/// (n_b) per time bin. Detector efficiency is folded into n_a.
struct LinkBudget {
  double na = 0.0;
  double nb = 0.0;

  LinkBudget(double na_, double nb_) : na(na_), nb(nb_) {
    if (!std::isfinite(na) || na < 0.0) detail::domain_fail("LinkBudget", na, "n_a must be finite and >= 0");
    if (!std::isfinite(nb) || nb < 0.0) detail::domain_fail("LinkBudget", nb, "n_b must be finite and >= 0");
  }
};

enum class OrderMode { continuous, integer };

/// PPM frame length M >= 2, continuous or integer flavor.
struct PpmOrder {
  double m = 2.0;
  OrderMode mode = OrderMode::continuous;

  explicit PpmOrder(double m_, OrderMode mode_ = OrderMode::continuous) : m(m_), mode(mode_) {
    if (!std::isfinite(m) || m < 2.0) detail::domain_fail("PpmOrder", m, "M must be finite and >= 2");
    if (mode == OrderMode::integer && m != std::floor(m))
      detail::domain_fail("PpmOrder", m, "must be a whole number in integer mode");
  }
};

/// A priori probability of sending a pulse in a bin, 0 < q < 1.
struct PulseProbability {
  double q = 0.5;

  explicit PulseProbability(double q_) : q(q_) {
    if (!(q > 0.0 && q < 1.0)) detail::domain_fail("PulseProbability", q, "must lie in (0,1)");
  }
};

enum class Method { exact_numeric, analytic, monte_carlo };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::exact_numeric: return "exact-numeric";
    case Method::analytic: return "analytic";
    case Method::monte_carlo: return "monte-carlo";
  }
  return "?";
}

/// Mutual information result: bits/bin, derived PIE (absent when n_a = 0),
/// the parameter value (M or q) that produced it, and the method tag.
struct InfoResult {
  double bits_per_bin = 0.0;
  std::optional<double> pie;  // bits/photon; unset when n_a = 0
  double param = 0.0;         // M for PPM, q for OOK
  Method method = Method::exact_numeric;
};

/// Stable 1 - exp(-x); accurate for x down to the underflow threshold.
inline double click_prob(double x) { return -std::expm1(-x); }

/// Per-bin click probabilities for a PPM frame: pulse energy is M*n_a.
struct ClickProbabilities {
  double pp = 0.0;  // pulse-only click
  double pb = 0.0;  // background-only click
  double pc = 0.0;  // pulse + background click, pc = pp + pb - pp*pb
  double pe = 0.0;  // exclusive click in the correct bin
  double pd = 0.0;  // click in one specific wrong bin
};

inline ClickProbabilities click_probs_ppm(const LinkBudget& budget, const PpmOrder& order) {
  const double m = order.m;
  ClickProbabilities p;
  p.pp = click_prob(m * budget.na);
  p.pb = click_prob(budget.nb);
  p.pc = click_prob(m * budget.na + budget.nb);
  // pe = pc*(1-pb)^(M-1) = exp(-(M-1)nb) - exp(-M(na+nb))
  p.pe = std::exp(-(m - 1.0) * budget.nb) - std::exp(-m * (budget.na + budget.nb));
  p.pd = (1.0 - p.pc) * p.pb * std::pow(1.0 - p.pb, m - 2.0);
  return p;
}

namespace detail {

// u*log2(u) with the 0 log 0 = 0 convention, no domain guard (u >= 0 by construction)
inline double xlog2(double u) { return u > 0.0 ? u * std::log2(u) : 0.0; }

inline double clip_mi(double bits, const char* fn) {
  if (bits < 0.0) {
    if (bits < -1e-12) domain_fail(fn, bits, "internal error: MI below -1e-12");
    bits = 0.0;
  }
  return bits;
}

inline std::optional<double> pie_of(double bits, double na) {
  if (na > 0.0) return bits / na;
  return std::nullopt;
}

}  // namespace detail

/// M-ary erasure channel: I = (p_p / M) * log2 M. Ignores n_b.
inline InfoResult mi_ppm_noiseless(const LinkBudget& budget, const PpmOrder& order) {
  const double pp = click_prob(order.m * budget.na);
  const double bits = pp / order.m * std::log2(order.m);
  return {bits, detail::pie_of(bits, budget.na), order.m, Method::exact_numeric};
}

/// Three-term decomposition of the noiseless OOK mutual information:
///   I = q p_p log2(1/q) + q(1-p_p) log2(1-p_p) - (1-q p_p) log2(1-q p_p).
struct OokDecomposition {
  double ppm_like = 0.0;   // q p_p log2(1/q)
  double miss = 0.0;       // q (1-p_p) log2(1-p_p)
  double marginal = 0.0;   // -(1-q p_p) log2(1-q p_p)
  double sum() const { return ppm_like + miss + marginal; }
};

inline OokDecomposition mi_ook_noiseless_decomposition(const LinkBudget& budget,
                                                       const PulseProbability& prior) {
  const double q = prior.q;
  const double pp = click_prob(budget.na / q);
  OokDecomposition d;
  d.ppm_like = -q * pp * std::log2(q);
  d.miss = q * (1.0 - pp) * std::log1p(-pp) * kLog2E;
  d.marginal = -(1.0 - q * pp) * std::log1p(-q * pp) * kLog2E;
  return d;
}

/// Z-channel: I = H(q p_p) - q H(p_p), with p_p = 1 - exp(-n_a/q).
inline InfoResult mi_ook_noiseless(const LinkBudget& budget, const PulseProbability& prior) {
  const double q = prior.q;
  const double pp = click_prob(budget.na / q);
  const double bits =
      detail::clip_mi(binary_entropy(q * pp) - q * binary_entropy(pp), "mi_ook_noiseless");
  return {bits, detail::pie_of(bits, budget.na), q, Method::exact_numeric};
}

/// Binary asymmetric channel, exact entropy form:
///   I = H(q p_c + (1-q) p_b) - q H(p_c) - (1-q) H(p_b).
inline InfoResult mi_ook_noisy(const LinkBudget& budget, const PulseProbability& prior) {
  const double q = prior.q;
  const double pc = click_prob(budget.na / q + budget.nb);
  const double pb = click_prob(budget.nb);
  const double bits = detail::clip_mi(binary_entropy(q * pc + (1.0 - q) * pb) -
                                          q * binary_entropy(pc) - (1.0 - q) * binary_entropy(pb),
                                      "mi_ook_noisy");
  return {bits, detail::pie_of(bits, budget.na), q, Method::exact_numeric};
}

/// PPM with the simple-decision receiver (multi-click frames are erasures):
///   I = (p_e/M) log2 M + ((M-1)/M) p_d log2(M p_d / p_e)
///       - (p_e + (M-1) p_d)/M * log2(1 + (M-1) p_d / p_e),
/// evaluated in the algebraically equivalent stable form
///   I = [ p_e log2(M p_e) + (M-1) p_d log2(M p_d) - s log2 s ] / M,
/// with s = p_e + (M-1) p_d, so that p_e = p_d cancels exactly to zero.
inline InfoResult mi_ppm_noisy(const LinkBudget& budget, const PpmOrder& order) {
  const double m = order.m;
  const ClickProbabilities p = click_probs_ppm(budget, order);
  const double k = m - 1.0;
  const double s = p.pe + k * p.pd;
  const double correct = p.pe > 0.0 ? p.pe * std::log2(m * p.pe) : 0.0;
  const double wrong = p.pd > 0.0 ? k * p.pd * std::log2(m * p.pd) : 0.0;
  const double bits = detail::clip_mi((correct + wrong - detail::xlog2(s)) / m, "mi_ppm_noisy");
  return {bits, detail::pie_of(bits, budget.na), m, Method::exact_numeric};
}

}  // namespace ppmlink
