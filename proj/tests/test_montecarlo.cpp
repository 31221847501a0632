#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "ppmlink/montecarlo.hpp"

using namespace ppmlink;

namespace {

SimConfig ppm_config(double na, double nb, int m, std::uint64_t frames, std::uint64_t seed) {
  return SimConfig{LinkBudget(na, nb), Scheme::ppm, m, 0.5, frames, seed};
}

SimConfig ook_config(double na, double nb, double q, std::uint64_t frames, std::uint64_t seed) {
  return SimConfig{LinkBudget(na, nb), Scheme::ook, 2, q, frames, seed};
}

}  // namespace

TEST_CASE("config validation") {
  CHECK_THROWS_AS(simulate(ppm_config(0.1, 0.0, 4, 0, 1)), std::domain_error);
  CHECK_THROWS_AS(simulate(ppm_config(0.1, 0.0, 1, 10, 1)), std::domain_error);
  CHECK_THROWS_AS(simulate(ook_config(0.1, 0.0, 1.0, 10, 1)), std::domain_error);
}

TEST_CASE("dark link: all erasures / no clicks") {
  const auto ppm = simulate(ppm_config(0.0, 0.0, 4, 1000, 3));
  std::uint64_t erasures = 0;
  for (const auto& row : ppm.joint_counts) erasures += row.back();
  CHECK(erasures == 1000);
  CHECK(estimate_mi(ppm) == 0.0);

  const auto ook = simulate(ook_config(0.0, 0.0, 0.5, 1000, 3));
  CHECK(ook.joint_counts[0][1] + ook.joint_counts[1][1] == 0);
}

TEST_CASE("seed determinism, independent of thread count") {
  const auto cfg = ppm_config(0.05, 0.02, 8, 300000, 42);
  const auto a = simulate(cfg);
  const auto b = simulate(cfg);
  CHECK(a.joint_counts == b.joint_counts);

  setenv("PPM_LINK_THREADS", "1", 1);
  const auto serial = simulate(cfg);
  setenv("PPM_LINK_THREADS", "4", 1);
  const auto parallel = simulate(cfg);
  unsetenv("PPM_LINK_THREADS");
  CHECK(serial.joint_counts == parallel.joint_counts);
  CHECK(serial.joint_counts == a.joint_counts);
}

TEST_CASE("noiseless PPM erasure fraction matches 1 - p_p") {
  const std::uint64_t n = 1000000;
  const auto ch = simulate(ppm_config(1e-2, 0.0, 16, n, 5));
  std::uint64_t erasures = 0;
  for (const auto& row : ch.joint_counts) erasures += row.back();
  const double pp = click_prob(16 * 1e-2);
  const double sigma = std::sqrt(pp * (1.0 - pp) / n);
  CHECK(std::abs(double(erasures) / n - (1.0 - pp)) < 4.0 * sigma);
}

TEST_CASE("empirical exclusive-click probability matches the closed form") {
  const std::uint64_t n = 1000000;
  const LinkBudget budget(0.1, 0.01);
  const auto ch = simulate(ppm_config(0.1, 0.01, 4, n, 7));
  const auto p = click_probs_ppm(budget, PpmOrder(4));

  std::uint64_t correct = 0, total = 0;
  for (std::size_t x = 0; x < ch.inputs(); ++x)
    for (std::size_t y = 0; y < ch.outcomes(); ++y) {
      total += ch.joint_counts[x][y];
      if (x == y) correct += ch.joint_counts[x][y];
    }
  CHECK(total == n);
  const double sigma = std::sqrt(p.pe * (1.0 - p.pe) / n);
  CHECK(std::abs(double(correct) / n - p.pe) < 4.0 * sigma);
}

TEST_CASE("plug-in estimator on deterministic channels") {
  EmpiricalChannel identity;
  identity.joint_counts = {{250, 0, 0, 0, 0}, {0, 250, 0, 0, 0}, {0, 0, 250, 0, 0}, {0, 0, 0, 250, 0}};
  identity.frames = 1000;
  identity.bins_per_symbol = 4;
  CHECK(estimate_mi(identity) == doctest::Approx(std::log2(4.0) / 4.0).epsilon(1e-14));

  EmpiricalChannel erased;
  erased.joint_counts = {{0, 0, 0, 0, 500}, {0, 0, 0, 0, 500}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}};
  erased.frames = 1000;
  erased.bins_per_symbol = 4;
  CHECK(estimate_mi(erased) == 0.0);

  CHECK_THROWS_AS(estimate_mi(EmpiricalChannel{}), std::domain_error);
}

TEST_CASE("estimate converges to the analytic MI as frames grow") {
  const LinkBudget budget(1e-2, 1e-3);
  const double analytic = mi_ppm_noisy(budget, PpmOrder(64)).bits_per_bin;
  double prev_err = 1e300;
  int improvements = 0;
  for (std::uint64_t frames : {100000ull, 1000000ull, 4000000ull}) {
    const double est = estimate_mi(simulate(ppm_config(1e-2, 1e-3, 64, frames, 11)));
    const double err = std::abs(est - analytic);
    if (err < prev_err) ++improvements;
    prev_err = err;
  }
  CHECK(improvements >= 2);
  CHECK(prev_err / analytic < 0.05);
}

TEST_CASE("OOK estimate within bootstrap error of the exact MI") {
  const LinkBudget budget(1e-2, 0.0);
  const auto ch = simulate(ook_config(1e-2, 0.0, 0.1, 2000000, 13));
  const auto boot = bootstrap_mi(ch, 50, 13);
  const double analytic = mi_ook_noisy(budget, PulseProbability(0.1)).bits_per_bin;
  CHECK(std::abs(boot.mi - analytic) < 3.0 * boot.sigma + estimate_mi_bias(ch));
  CHECK(boot.sigma > 0.0);
}

TEST_CASE("wrong-bin clicks are exchangeable across bins") {
  // input symbol 0: single wrong-bin outcomes should be uniform over bins 1..M-1
  const int m = 8;
  const auto ch = simulate(ppm_config(0.05, 0.05, m, 2000000, 17));
  std::uint64_t total = 0;
  for (int y = 1; y < m; ++y) total += ch.joint_counts[0][y];
  const double expected = double(total) / (m - 1);
  double chi2 = 0.0;
  for (int y = 1; y < m; ++y) {
    const double d = double(ch.joint_counts[0][y]) - expected;
    chi2 += d * d / expected;
  }
  // chi-square critical value, df = 6, alpha = 0.001
  CHECK(chi2 < 22.458);
}

TEST_CASE("bias estimate scales as (K-1)(J-1)/(2N ln 2)") {
  EmpiricalChannel ch;
  ch.joint_counts.assign(4, std::vector<std::uint64_t>(5, 10));
  ch.frames = 200;
  ch.bins_per_symbol = 4;
  CHECK(estimate_mi_bias(ch) ==
        doctest::Approx(4.0 * 3.0 / (2.0 * 200.0 * std::log(2.0)) / 4.0).epsilon(1e-14));
}
