#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

// Numerical kernel: Lambert W (principal branch), entropy functions and the
// noise penalty g(x). All functions here are pure and thread-safe.

namespace ppmlink {

inline constexpr double kLog2E = 1.4426950408889634073599246810019;  // log2(e)

namespace detail {

[[noreturn]] inline void domain_fail(const char* fn, double x, const char* what) {
  throw std::domain_error(std::string(fn) + ": argument " + std::to_string(x) + " " + what);
}

}  // namespace detail

/// x * log2(x), with the limit value 0 at x = 0.
inline double xlog2x(double x) {
  if (!(x >= 0.0)) detail::domain_fail("xlog2x", x, "must be >= 0");
  if (x == 0.0) return 0.0;
  return x * std::log2(x);
}

/// Two-term asymptotic expansion W(x) ~ log x - log log x, valid for x > e.
/// Used to seed the exact iteration and in asymptotic cross-checks.
inline double lambert_w0_asymptotic(double x) {
  constexpr double e = 2.718281828459045235360287471352662;
  if (!(x > e)) detail::domain_fail("lambert_w0_asymptotic", x, "must be > e");
  const double lx = std::log(x);
  return lx - std::log(lx);
}

/// Validated argument of the principal Lambert branch, x >= -1/e.
class WArgument {
 public:
  explicit WArgument(double x) : x_(x) {
    constexpr double branch_point = -0.36787944117144232159552377016146;  // -1/e
    if (!std::isfinite(x)) detail::domain_fail("WArgument", x, "must be finite");
    if (x < branch_point - 1e-12) detail::domain_fail("WArgument", x, "must be >= -1/e");
    if (x < branch_point) x_ = branch_point;  // within tolerance, snap to the branch point
  }
  double value() const { return x_; }

 private:
  double x_;
};

/// Principal branch of the Lambert W function, w*exp(w) = x.
/// Halley iteration; relative residual <= 1e-12 over the whole domain.
inline double lambert_w0(WArgument arg) {
  const double x = arg.value();
  constexpr double e = 2.718281828459045235360287471352662;
  if (x == 0.0) return 0.0;
  if (std::abs(x * e + 1.0) < 1e-15) return -1.0;  // branch point

  double w;
  if (x > e) {
    w = lambert_w0_asymptotic(x);
  } else {
    w = x * (1.0 - x);  // adequate seed on [-1/e, e]
    if (w < -0.99) w = -0.99;
  }

  for (int i = 0; i < 50; ++i) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    const double step = f / denom;
    w -= step;
    if (std::abs(step) <= 1e-14 * std::max(1e-300, std::abs(w))) break;
  }
  return w;
}

inline double lambert_w0(double x) { return lambert_w0(WArgument(x)); }

/// Binary entropy H(x) = -x log2 x - (1-x) log2(1-x), with 0 log 0 = 0.
inline double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) detail::domain_fail("binary_entropy", x, "must be in [0,1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  // (1-x)*log(1-x) via log1p keeps accuracy for x near 0
  return -(x * std::log(x) + (1.0 - x) * std::log1p(-x)) * kLog2E;
}

/// Noise penalty g(x) = (x+1) log2(x+1) - x log2 x, g(0) = 0.
/// Nonnegative, increasing and concave on x >= 0. Equals the bits/bin
/// capacity of a lossy bosonic channel at mean photon number x.
inline double noise_penalty_g(double x) {
  if (!(x >= 0.0)) detail::domain_fail("noise_penalty_g", x, "must be >= 0");
  if (x == 0.0) return 0.0;
  // (x+1)log(x+1) - x log x = x*log1p(1/x) + log1p(x)
  return (x * std::log1p(1.0 / x) + std::log1p(x)) * kLog2E;
}

}  // namespace ppmlink
