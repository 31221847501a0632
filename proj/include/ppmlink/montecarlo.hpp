#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <cmath>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "ppmlink/channels.hpp"

// Stochastic oracle: simulates Poissonian photodetection frame by frame and
// estimates mutual information from the empirical joint counts. Simulation is
// deterministic given the seed and independent of the degree of parallelism.

namespace ppmlink {

enum class Scheme { ppm, ook };

struct SimConfig {
  LinkBudget budget;
  Scheme scheme = Scheme::ppm;
  int ppm_order = 2;       // M, used when scheme == ppm
  double pulse_prior = 0.5;  // q, used when scheme == ook
  std::uint64_t frames = 0;
  std::uint64_t seed = 0;

  void validate() const {
    if (frames < 1) throw std::domain_error("SimConfig: frames must be >= 1");
    if (scheme == Scheme::ppm && ppm_order < 2)
      throw std::domain_error("SimConfig: PPM order must be >= 2");
    if (scheme == Scheme::ook && !(pulse_prior > 0.0 && pulse_prior < 1.0))
      throw std::domain_error("SimConfig: pulse prior must lie in (0,1)");
  }
};

/// Empirical input x outcome counts. For PPM the outcome alphabet is
/// {bin 1..M, erasure} (erasure last); for OOK it is {no-click, click}.
struct EmpiricalChannel {
  std::vector<std::vector<std::uint64_t>> joint_counts;  // [input][outcome]
  std::uint64_t frames = 0;
  int bins_per_symbol = 1;  // M for ppm, 1 for ook

  std::size_t inputs() const { return joint_counts.size(); }
  std::size_t outcomes() const { return joint_counts.empty() ? 0 : joint_counts.front().size(); }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d9b3b12fd459f9ULL;
  return z ^ (z >> 31);
}

inline unsigned simulation_threads() {
  if (const char* env = std::getenv("PPM_LINK_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n >= 1) return static_cast<unsigned>(n);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

// One block of frames with its own RNG stream; counts are added into `joint`.
inline void simulate_block(const SimConfig& cfg, std::uint64_t block_index, std::uint64_t n,
                           std::vector<std::vector<std::uint64_t>>& joint) {
  std::mt19937_64 rng(splitmix64(cfg.seed ^ splitmix64(block_index)));
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  if (cfg.scheme == Scheme::ook) {
    const double pc = click_prob(cfg.budget.na / cfg.pulse_prior + cfg.budget.nb);
    const double pb = click_prob(cfg.budget.nb);
    for (std::uint64_t f = 0; f < n; ++f) {
      const int x = unit(rng) < cfg.pulse_prior ? 1 : 0;
      const int y = unit(rng) < (x ? pc : pb) ? 1 : 0;
      ++joint[x][y];
    }
    return;
  }

  const int m = cfg.ppm_order;
  const ClickProbabilities p = click_probs_ppm(cfg.budget, PpmOrder(double(m)));
  std::uniform_int_distribution<int> symbol(0, m - 1);
  std::binomial_distribution<int> background(m - 1, p.pb);
  for (std::uint64_t f = 0; f < n; ++f) {
    const int x = symbol(rng);
    const bool pulse_click = unit(rng) < p.pc;
    const int noise_clicks = p.pb > 0.0 ? background(rng) : 0;
    int outcome = m;  // erasure
    if (pulse_click && noise_clicks == 0) {
      outcome = x;
    } else if (!pulse_click && noise_clicks == 1) {
      // single background click, uniform over the M-1 non-pulse bins
      int k = std::uniform_int_distribution<int>(0, m - 2)(rng);
      outcome = k >= x ? k + 1 : k;
    }
    ++joint[x][outcome];
  }
}

}  // namespace detail

/// Frame-by-frame simulation of the simple-decision PPM receiver or the OOK
/// channel. Frames are split into fixed-size blocks, each with an independent
/// RNG stream, so serial and parallel runs of the same seed agree exactly.
inline EmpiricalChannel simulate(const SimConfig& cfg) {
  cfg.validate();

  EmpiricalChannel ch;
  const std::size_t n_in = cfg.scheme == Scheme::ppm ? cfg.ppm_order : 2;
  const std::size_t n_out = cfg.scheme == Scheme::ppm ? cfg.ppm_order + 1 : 2;
  ch.joint_counts.assign(n_in, std::vector<std::uint64_t>(n_out, 0));
  ch.frames = cfg.frames;
  ch.bins_per_symbol = cfg.scheme == Scheme::ppm ? cfg.ppm_order : 1;

  constexpr std::uint64_t kBlock = 1u << 16;
  const std::uint64_t n_blocks = (cfg.frames + kBlock - 1) / kBlock;
  const unsigned n_threads = std::min<std::uint64_t>(detail::simulation_threads(), n_blocks);

  std::mutex merge_mutex;
  std::atomic<std::uint64_t> next_block{0};
  auto worker = [&]() {
    std::vector<std::vector<std::uint64_t>> local(n_in, std::vector<std::uint64_t>(n_out, 0));
    for (;;) {
      const std::uint64_t b = next_block.fetch_add(1);
      if (b >= n_blocks) break;
      const std::uint64_t n = std::min(kBlock, cfg.frames - b * kBlock);
      detail::simulate_block(cfg, b, n, local);
    }
    std::lock_guard<std::mutex> lock(merge_mutex);
    for (std::size_t i = 0; i < n_in; ++i)
      for (std::size_t j = 0; j < n_out; ++j) ch.joint_counts[i][j] += local[i][j];
  };

  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return ch;
}

/// Plug-in mutual information of an empirical joint distribution, in bits per
/// time bin (bits/frame divided by bins_per_symbol).
inline double estimate_mi(const EmpiricalChannel& ch) {
  if (ch.frames == 0) throw std::domain_error("estimate_mi: no counts");
  const double n = double(ch.frames);
  const std::size_t rows = ch.inputs(), cols = ch.outcomes();

  std::vector<double> row_sum(rows, 0.0), col_sum(cols, 0.0);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      row_sum[i] += double(ch.joint_counts[i][j]);
      col_sum[j] += double(ch.joint_counts[i][j]);
    }

  double bits_per_frame = 0.0;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      const double c = double(ch.joint_counts[i][j]);
      if (c > 0.0) bits_per_frame += c / n * std::log2(c * n / (row_sum[i] * col_sum[j]));
    }
  return std::max(0.0, bits_per_frame) / ch.bins_per_symbol;
}

/// First-order plug-in bias, (K-1)(J-1)/(2 N ln 2) bits/frame scaled to
/// bits/bin; the estimate is biased upward by roughly this amount.
inline double estimate_mi_bias(const EmpiricalChannel& ch) {
  const double k = double(ch.outcomes()), j = double(ch.inputs());
  return (k - 1.0) * (j - 1.0) / (2.0 * double(ch.frames) * std::log(2.0)) / ch.bins_per_symbol;
}

struct BootstrapResult {
  double mi = 0.0;     // plug-in estimate on the original counts
  double sigma = 0.0;  // bootstrap standard error
  int resamples = 0;
};

/// Nonparametric bootstrap of the plug-in MI: resample frames from the
/// empirical joint distribution and take the standard deviation.
inline BootstrapResult bootstrap_mi(const EmpiricalChannel& ch, int resamples = 50,
                                    std::uint64_t seed = 0x9d2c5680u) {
  BootstrapResult res;
  res.mi = estimate_mi(ch);
  res.resamples = resamples;
  if (resamples < 2) return res;

  // flatten cells with nonzero probability
  struct Cell { std::size_t i, j; double p; };
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < ch.inputs(); ++i)
    for (std::size_t j = 0; j < ch.outcomes(); ++j)
      if (ch.joint_counts[i][j] > 0)
        cells.push_back({i, j, double(ch.joint_counts[i][j]) / double(ch.frames)});

  std::mt19937_64 rng(detail::splitmix64(seed));
  std::vector<double> values(resamples, 0.0);
  EmpiricalChannel boot = ch;
  for (int r = 0; r < resamples; ++r) {
    for (auto& row : boot.joint_counts) std::fill(row.begin(), row.end(), 0);
    // sequential binomial thinning of the multinomial
    std::uint64_t remaining = ch.frames;
    double p_left = 1.0;
    for (const Cell& c : cells) {
      if (remaining == 0) break;
      const double p = std::min(1.0, c.p / p_left);
      const std::uint64_t draw =
          p >= 1.0 ? remaining
                   : std::binomial_distribution<std::uint64_t>(remaining, p)(rng);
      boot.joint_counts[c.i][c.j] = draw;
      remaining -= draw;
      p_left -= c.p;
    }
    values[r] = estimate_mi(boot);
  }

  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= resamples;
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  res.sigma = std::sqrt(var / (resamples - 1));
  return res;
}

}  // namespace ppmlink
