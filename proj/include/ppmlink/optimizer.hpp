#pragma once

#include <algorithm>
#include <cmath>
#include <functional>

#include "ppmlink/approximations.hpp"
#include "ppmlink/channels.hpp"

// Numerical maximization of the exact MI expressions over M (PPM) or q (OOK),
// serving as ground truth against the closed-form approximations.

namespace ppmlink {

struct OptimizationReport {
  double best_param = 0.0;
  double best_bits_per_bin = 0.0;
  double best_pie = 0.0;  // 0 when PIE is undefined (n_a = 0)
  long evaluations = 0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  bool converged = false;
  bool multimodal = false;  // coarse scan saw more than one interior local max
};

namespace detail {

// Golden-section maximization over log-parameter after a coarse scan that
// localizes the peak of a unimodal objective.
inline OptimizationReport maximize_log_scale(const std::function<double(double)>& objective,
                                             double lo, double hi) {
  OptimizationReport rep;
  rep.bracket_lo = lo;
  rep.bracket_hi = hi;

  constexpr int kScanPoints = 64;
  const double llo = std::log(lo);
  const double lhi = std::log(hi);

  double scan_f[kScanPoints];
  int best_i = 0;
  for (int i = 0; i < kScanPoints; ++i) {
    const double p = std::exp(llo + (lhi - llo) * i / (kScanPoints - 1));
    scan_f[i] = objective(p);
    ++rep.evaluations;
    if (scan_f[i] > scan_f[best_i]) best_i = i;
  }
  int interior_maxima = 0;
  for (int i = 1; i + 1 < kScanPoints; ++i)
    if (scan_f[i] > scan_f[i - 1] && scan_f[i] > scan_f[i + 1]) ++interior_maxima;
  rep.multimodal = interior_maxima > 1;

  double a = llo + (lhi - llo) * std::max(0, best_i - 1) / (kScanPoints - 1);
  double b = llo + (lhi - llo) * std::min(kScanPoints - 1, best_i + 1) / (kScanPoints - 1);

  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = objective(std::exp(c));
  double fd = objective(std::exp(d));
  rep.evaluations += 2;

  constexpr int kMaxIter = 200;
  int iter = 0;
  for (; iter < kMaxIter; ++iter) {
    if (b - a <= 1e-8 * std::max(1.0, std::abs(a))) break;
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = objective(std::exp(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = objective(std::exp(d));
    }
    ++rep.evaluations;
  }
  rep.converged = iter < kMaxIter;

  rep.best_param = std::exp(0.5 * (a + b));
  rep.best_bits_per_bin = objective(rep.best_param);
  ++rep.evaluations;
  return rep;
}

}  // namespace detail

/// Maximize noisy PPM mutual information (noiseless when n_b = 0) over the
/// order M. Continuous mode searches [2, 20/(gamma n_a)]; integer mode
/// refines the continuous optimum over a +-2 integer neighborhood.
inline OptimizationReport maximize_ppm_order(const LinkBudget& budget, OrderMode mode) {
  if (!(budget.na > 0.0)) detail::domain_fail("maximize_ppm_order", budget.na, "n_a must be > 0");
  const double gamma = 1.0 + 2.0 * budget.nb / budget.na;
  const double hi = std::max(4.0, 20.0 / (gamma * budget.na));

  auto objective = [&budget](double m) {
    return mi_ppm_noisy(budget, PpmOrder(m)).bits_per_bin;
  };

  OptimizationReport rep = detail::maximize_log_scale(objective, 2.0, hi);

  if (mode == OrderMode::integer) {
    const double center = rep.best_param;
    double best_m = std::max(2.0, std::floor(center));
    double best_f = objective(best_m);
    ++rep.evaluations;
    for (double m = std::floor(center) - 2.0; m <= std::ceil(center) + 2.0; m += 1.0) {
      if (m < 2.0 || m == best_m) continue;
      const double f = objective(m);
      ++rep.evaluations;
      if (f > best_f) {
        best_f = f;
        best_m = m;
      }
    }
    rep.best_param = best_m;
    rep.best_bits_per_bin = best_f;
  }

  rep.best_pie = budget.na > 0.0 ? rep.best_bits_per_bin / budget.na : 0.0;
  return rep;
}

/// Maximize exact OOK mutual information over the pulse prior q.
inline OptimizationReport maximize_ook_prior(const LinkBudget& budget) {
  if (!(budget.na > 0.0)) detail::domain_fail("maximize_ook_prior", budget.na, "n_a must be > 0");
  const double lo = std::min(budget.na / 20.0, 0.25);

  auto objective = [&budget](double q) {
    return mi_ook_noisy(budget, PulseProbability(q)).bits_per_bin;
  };

  OptimizationReport rep = detail::maximize_log_scale(objective, lo, 0.5);
  rep.best_pie = rep.best_bits_per_bin / budget.na;
  return rep;
}

}  // namespace ppmlink
