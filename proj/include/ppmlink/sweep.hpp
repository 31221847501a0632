#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ppmlink/approximations.hpp"
#include "ppmlink/montecarlo.hpp"
#include "ppmlink/optimizer.hpp"

// Batch evaluation over a logarithmic n_a grid at fixed noise ratios, plus
// the CSV presets behind the figure subcommand. Output ordering and
// formatting are deterministic.

namespace ppmlink {

enum class EvalMethod { analytic, numeric, montecarlo };

inline const char* eval_method_name(EvalMethod m) {
  switch (m) {
    case EvalMethod::analytic: return "analytic";
    case EvalMethod::numeric: return "numeric";
    case EvalMethod::montecarlo: return "montecarlo";
  }
  return "?";
}

struct SweepSpec {
  double na_start = 1e-6;
  double na_stop = 1e-2;
  int points_per_decade = 10;
  std::vector<double> noise_ratios = {0.0};
  std::vector<Scheme> schemes = {Scheme::ppm, Scheme::ook};
  std::vector<EvalMethod> methods = {EvalMethod::analytic, EvalMethod::numeric};
  std::uint64_t mc_frames = 1000000;
  std::uint64_t seed = 1;

  void validate() const {
    if (!(na_start > 0.0 && na_stop > na_start))
      throw std::domain_error("SweepSpec: need 0 < na_start < na_stop");
    if (points_per_decade < 1) throw std::domain_error("SweepSpec: points_per_decade must be >= 1");
  }
};

/// Endpoint-inclusive logarithmic grid with points_per_decade spacing.
inline std::vector<double> log_grid(double start, double stop, int points_per_decade) {
  const double decades = std::log10(stop / start);
  const int n = std::max(1, int(std::lround(decades * points_per_decade))) + 1;
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i)
    grid[i] = start * std::pow(10.0, decades * i / (n - 1));
  grid.back() = stop;
  return grid;
}

struct SweepRow {
  double na = 0.0, nb = 0.0;
  Scheme scheme = Scheme::ppm;
  EvalMethod method = EvalMethod::analytic;
  double param = 0.0;  // M or q
  double bits_per_bin = 0.0;
  double pie = 0.0;
};

inline SweepRow evaluate_point(double na, double nb, Scheme scheme, EvalMethod method,
                               std::uint64_t mc_frames, std::uint64_t seed) {
  SweepRow row{na, nb, scheme, method, 0.0, 0.0, 0.0};
  const LinkBudget budget(na, nb);
  switch (method) {
    case EvalMethod::analytic: {
      const double gamma = 1.0 + 2.0 * nb / na;
      if (scheme == Scheme::ppm) {
        row.param = opt_order_noisy(na, GammaFactor(gamma));
        row.pie = pie_ppm_noisy(na, nb);
      } else {
        // noise leaves the OOK prior optimum essentially unchanged, q* = 1/M*
        row.param = 1.0 / opt_order_noiseless(na);
        row.pie = pie_ook_noisy(na, NoiseRatio(nb / na));
      }
      row.bits_per_bin = row.pie * na;
      break;
    }
    case EvalMethod::numeric: {
      const OptimizationReport rep = scheme == Scheme::ppm
                                         ? maximize_ppm_order(budget, OrderMode::continuous)
                                         : maximize_ook_prior(budget);
      row.param = rep.best_param;
      row.bits_per_bin = rep.best_bits_per_bin;
      row.pie = rep.best_pie;
      break;
    }
    case EvalMethod::montecarlo: {
      SimConfig cfg{budget, scheme, 2, 0.5, mc_frames, seed};
      const OptimizationReport rep = scheme == Scheme::ppm
                                         ? maximize_ppm_order(budget, OrderMode::integer)
                                         : maximize_ook_prior(budget);
      if (scheme == Scheme::ppm)
        cfg.ppm_order = int(rep.best_param);
      else
        cfg.pulse_prior = rep.best_param;
      row.param = rep.best_param;
      row.bits_per_bin = estimate_mi(simulate(cfg));
      row.pie = row.bits_per_bin / na;
      break;
    }
  }
  return row;
}

/// Rows in deterministic order: na ascending, then ratio, then scheme, then method.
inline std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  std::vector<SweepRow> rows;
  for (double na : log_grid(spec.na_start, spec.na_stop, spec.points_per_decade))
    for (double r : spec.noise_ratios)
      for (Scheme scheme : spec.schemes)
        for (EvalMethod method : spec.methods)
          rows.push_back(evaluate_point(na, na * r, scheme, method, spec.mc_frames, spec.seed));
  return rows;
}

inline std::string format_sig12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "na,nb,scheme,method,param,bits_per_bin,pie\n";
  for (const SweepRow& r : rows) {
    out += format_sig12(r.na) + ',' + format_sig12(r.nb) + ',';
    out += r.scheme == Scheme::ppm ? "ppm," : "ook,";
    out += eval_method_name(r.method);
    out += ',' + format_sig12(r.param) + ',' + format_sig12(r.bits_per_bin) + ',' +
           format_sig12(r.pie) + '\n';
  }
  return out;
}

/// Write via temp file + rename so a failed run never leaves partial output.
inline void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp + " for writing");
    f << content;
    if (!f.good()) throw std::runtime_error("write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("rename failed for " + path);
}

// -- figure presets ----------------------------------------------------------

/// Noise-ratio legend values; the defaults mirror the usual presentation and
/// can be overridden from the CLI.
struct FigureConfig {
  std::vector<double> noise_ratios = {0.2, 0.5, 1.0};
  double na_start = 1e-7;
  double na_stop = 1e-2;
  int points_per_decade = 10;
};

/// Data for one of the supported figures:
///   fig2b: optimal PPM order (numeric + analytic) vs n_a
///   fig3:  optimal mean pulse photons M* n_a vs n_a
///   fig5:  optimized PPM PIE (numeric + analytic + capacity) vs n_a
///   fig6:  optimized OOK PIE (numeric + analytic + capacity) vs n_a
inline std::string figure_csv(const std::string& id, const FigureConfig& cfg = {}) {
  const bool with_capacity = id == "fig5" || id == "fig6";
  if (id != "fig2b" && id != "fig3" && !with_capacity)
    throw std::invalid_argument("unknown figure id: " + id);
  const Scheme scheme = id == "fig6" ? Scheme::ook : Scheme::ppm;

  std::vector<double> ratios = {0.0};
  ratios.insert(ratios.end(), cfg.noise_ratios.begin(), cfg.noise_ratios.end());

  std::string out = "na,noise_ratio,numeric,analytic";
  if (with_capacity) out += ",capacity";
  out += '\n';

  for (double na : log_grid(cfg.na_start, cfg.na_stop, cfg.points_per_decade)) {
    for (double r : ratios) {
      const SweepRow num = evaluate_point(na, na * r, scheme, EvalMethod::numeric, 0, 0);
      const SweepRow ana = evaluate_point(na, na * r, scheme, EvalMethod::analytic, 0, 0);
      double vn = 0.0, va = 0.0;
      if (id == "fig2b") {
        vn = num.param;
        va = ana.param;
      } else if (id == "fig3") {
        vn = num.param * na;
        va = ana.param * na;
      } else {
        vn = num.pie;
        va = ana.pie;
      }
      out += format_sig12(na) + ',' + format_sig12(r) + ',' + format_sig12(vn) + ',' +
             format_sig12(va);
      if (with_capacity) out += ',' + format_sig12(capacity_pie_bound(na));
      out += '\n';
    }
  }
  return out;
}

}  // namespace ppmlink
