#include <doctest.h>

#include <cmath>
#include <random>

#include "ppmlink/approximations.hpp"
#include "ppmlink/optimizer.hpp"

using namespace ppmlink;

namespace {

struct GridMax {
  double param;
  double value;
  double step;  // log-spacing ratio between neighbors
};

// Brute-force argmax over a dense log grid, the reference for the
// golden-section search.
template <typename F>
GridMax brute_force(const F& objective, double lo, double hi, int points) {
  GridMax best{lo, -1.0, std::pow(hi / lo, 1.0 / points)};
  for (int i = 0; i <= points; ++i) {
    const double p = lo * std::pow(hi / lo, double(i) / points);
    const double v = objective(p);
    if (v > best.value) {
      best.value = v;
      best.param = p;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("continuous PPM optimum matches the exhaustive integer scan") {
  const LinkBudget budget(1e-3, 0.0);
  double best_m = 2.0, best_i = -1.0;
  for (int m = 2; m <= 100000; ++m) {
    const double info = mi_ppm_noisy(budget, PpmOrder(double(m))).bits_per_bin;
    if (info > best_i) {
      best_i = info;
      best_m = m;
    }
  }
  const auto rep = maximize_ppm_order(budget, OrderMode::continuous);
  CHECK(rep.converged);
  CHECK(rep.best_param == doctest::Approx(best_m).epsilon(0.01));
  CHECK(rep.best_param == doctest::Approx(opt_order_noiseless(1e-3)).epsilon(0.20));
  CHECK(rep.best_bits_per_bin >= best_i - 1e-12);
}

TEST_CASE("noisy optimum sits below the noiseless one") {
  const auto noiseless = maximize_ppm_order(LinkBudget(1e-4, 0.0), OrderMode::continuous);
  const auto noisy = maximize_ppm_order(LinkBudget(1e-4, 1e-4), OrderMode::continuous);
  CHECK(noisy.best_param < noiseless.best_param);
  CHECK(noisy.best_bits_per_bin < noiseless.best_bits_per_bin);
}

TEST_CASE("local-max certificate at the returned parameter") {
  for (double r : {0.0, 1.0}) {
    const LinkBudget budget(3e-4, 3e-4 * r);
    const auto rep = maximize_ppm_order(budget, OrderMode::continuous);
    const double at = rep.best_bits_per_bin;
    CHECK(at >= mi_ppm_noisy(budget, PpmOrder(0.9 * rep.best_param)).bits_per_bin);
    CHECK(at >= mi_ppm_noisy(budget, PpmOrder(1.1 * rep.best_param)).bits_per_bin);

    const auto ook = maximize_ook_prior(budget);
    CHECK(ook.best_bits_per_bin >=
          mi_ook_noisy(budget, PulseProbability(0.9 * ook.best_param)).bits_per_bin);
    CHECK(ook.best_bits_per_bin >=
          mi_ook_noisy(budget, PulseProbability(1.1 * ook.best_param)).bits_per_bin);
  }
}

TEST_CASE("oracle equivalence on random operating points") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const double na = std::pow(10.0, -6.0 + 4.0 * u(rng));
    const double nb = u(rng) < 0.25 ? 0.0 : na * 2.0 * u(rng);
    const LinkBudget budget(na, nb);
    const double gamma = 1.0 + 2.0 * nb / na;

    auto objective = [&](double m) { return mi_ppm_noisy(budget, PpmOrder(m)).bits_per_bin; };
    const GridMax oracle = brute_force(objective, 2.0, 20.0 / (gamma * na), 100000);
    const auto rep = maximize_ppm_order(budget, OrderMode::continuous);
    CHECK(rep.converged);
    CHECK(rep.best_param / oracle.param < oracle.step * oracle.step);
    CHECK(oracle.param / rep.best_param < oracle.step * oracle.step);
    CHECK(rep.best_bits_per_bin >= oracle.value * (1.0 - 1e-6));
  }
}

TEST_CASE("integer mode dominance") {
  for (double na : {1e-3, 1e-4}) {
    const LinkBudget budget(na, na * 0.5);
    const auto cont = maximize_ppm_order(budget, OrderMode::continuous);
    const auto integer = maximize_ppm_order(budget, OrderMode::integer);
    CHECK(integer.best_param == std::floor(integer.best_param));
    CHECK(integer.best_bits_per_bin <= cont.best_bits_per_bin + 1e-15);
    for (double m = integer.best_param - 10.0; m <= integer.best_param + 10.0; m += 1.0) {
      if (m < 2.0) continue;
      CHECK(integer.best_bits_per_bin >=
            mi_ppm_noisy(budget, PpmOrder(m)).bits_per_bin - 1e-15);
    }
  }
}

TEST_CASE("OOK optimum near 1/M* and above PPM at matched rate") {
  const auto rep = maximize_ook_prior(LinkBudget(1e-4, 0.0));
  CHECK(rep.converged);
  CHECK(rep.best_param == doctest::Approx(1.0 / opt_order_noiseless(1e-4)).epsilon(0.25));

  const LinkBudget noisy(1e-4, 1e-4);
  const auto ook = maximize_ook_prior(noisy);
  const double m = 1.0 / ook.best_param;
  CHECK(ook.best_pie >= mi_ppm_noisy(noisy, PpmOrder(std::max(2.0, m))).pie.value());
}

TEST_CASE("reports are deterministic") {
  const LinkBudget budget(2e-4, 1e-4);
  const auto a = maximize_ppm_order(budget, OrderMode::continuous);
  const auto b = maximize_ppm_order(budget, OrderMode::continuous);
  CHECK(a.best_param == b.best_param);
  CHECK(a.best_bits_per_bin == b.best_bits_per_bin);
  CHECK(a.evaluations == b.evaluations);

  const auto c = maximize_ook_prior(budget);
  const auto d = maximize_ook_prior(budget);
  CHECK(c.best_param == d.best_param);
  CHECK(c.best_bits_per_bin == d.best_bits_per_bin);
}

TEST_CASE("report invariants") {
  const LinkBudget budget(1e-3, 2e-4);
  const auto rep = maximize_ppm_order(budget, OrderMode::continuous);
  CHECK(rep.bracket_lo <= rep.best_param);
  CHECK(rep.best_param <= rep.bracket_hi);
  CHECK(rep.best_bits_per_bin ==
        doctest::Approx(mi_ppm_noisy(budget, PpmOrder(rep.best_param)).bits_per_bin)
            .epsilon(1e-12));
  CHECK(!rep.multimodal);

  CHECK_THROWS_AS(maximize_ppm_order(LinkBudget(0.0, 0.0), OrderMode::continuous),
                  std::domain_error);
  CHECK_THROWS_AS(maximize_ook_prior(LinkBudget(0.0, 0.0)), std::domain_error);
}
