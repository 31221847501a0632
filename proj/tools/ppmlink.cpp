// Command-line surface: evaluate, optimize, sweep and emit figure data for
// PPM / generalized-OOK links with noisy direct detection.
//
// Exit codes: 0 success, 1 domain error, 2 usage error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ppmlink/approximations.hpp"
#include "ppmlink/channels.hpp"
#include "ppmlink/montecarlo.hpp"
#include "ppmlink/optimizer.hpp"
#include "ppmlink/sweep.hpp"

using nlohmann::json;
using namespace ppmlink;

namespace {

void emit(const std::string& content, const std::string& out_path) {
  if (out_path.empty())
    std::cout << content;
  else
    write_atomic(out_path, content);
}

Scheme parse_scheme(const std::string& s) {
  if (s == "ppm") return Scheme::ppm;
  if (s == "ook") return Scheme::ook;
  throw CLI::ValidationError("--scheme", "must be ppm or ook");
}

int cmd_pie(double na, double nb, const std::string& scheme_str, std::optional<double> order,
            std::optional<double> prior, const std::string& method) {
  if (!(na > 0.0)) throw std::domain_error("n_a must be positive");
  const Scheme scheme = parse_scheme(scheme_str);
  const LinkBudget budget(na, nb);

  json j;
  j["na"] = na;
  j["nb"] = nb;
  j["scheme"] = scheme_str;

  if (method == "analytic") {
    const SweepRow row = evaluate_point(na, nb, scheme, EvalMethod::analytic, 0, 0);
    j["method"] = "analytic";
    j["param"] = row.param;
    j["bits_per_bin"] = row.bits_per_bin;
    j["pie"] = row.pie;
  } else if (scheme == Scheme::ppm && order) {
    const InfoResult res = mi_ppm_noisy(budget, PpmOrder(*order));
    j["method"] = "exact-numeric";
    j["param"] = *order;
    j["bits_per_bin"] = res.bits_per_bin;
    j["pie"] = res.pie ? json(*res.pie) : json(nullptr);
  } else if (scheme == Scheme::ook && prior) {
    const InfoResult res = mi_ook_noisy(budget, PulseProbability(*prior));
    j["method"] = "exact-numeric";
    j["param"] = *prior;
    j["bits_per_bin"] = res.bits_per_bin;
    j["pie"] = res.pie ? json(*res.pie) : json(nullptr);
  } else {
    const OptimizationReport rep = scheme == Scheme::ppm
                                       ? maximize_ppm_order(budget, OrderMode::continuous)
                                       : maximize_ook_prior(budget);
    j["method"] = "exact-numeric";
    j["param"] = rep.best_param;
    j["bits_per_bin"] = rep.best_bits_per_bin;
    j["pie"] = rep.best_pie;
    j["converged"] = rep.converged;
  }
  std::cout << j.dump() << '\n';
  return 0;
}

int cmd_validate(const std::string& scheme_str, double na, double nb, int order, double prior,
                 std::uint64_t frames, std::uint64_t seed) {
  const Scheme scheme = parse_scheme(scheme_str);
  const LinkBudget budget(na, nb);

  SimConfig cfg{budget, scheme, order, prior, frames, seed};
  const EmpiricalChannel channel = simulate(cfg);
  const BootstrapResult boot = bootstrap_mi(channel, 50, seed ^ 0xb005eedULL);

  const double analytic = scheme == Scheme::ppm
                              ? mi_ppm_noisy(budget, PpmOrder(double(order))).bits_per_bin
                              : mi_ook_noisy(budget, PulseProbability(prior)).bits_per_bin;
  const double deviation = std::abs(boot.mi - analytic);
  const bool pass = deviation <= 3.0 * boot.sigma;

  json j;
  j["scheme"] = scheme_str;
  j["na"] = na;
  j["nb"] = nb;
  j["param"] = scheme == Scheme::ppm ? double(order) : prior;
  j["frames"] = frames;
  j["seed"] = seed;
  j["analytic_bits_per_bin"] = analytic;
  j["empirical_bits_per_bin"] = boot.mi;
  j["bias_estimate"] = estimate_mi_bias(channel);
  j["bootstrap_sigma"] = boot.sigma;
  j["verdict"] = pass ? "pass" : "fail";
  std::cout << j.dump() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"photon information efficiency of PPM / generalized OOK optical links"};
  app.require_subcommand(1);

  // pie
  double na = 0.0, nb = 0.0;
  std::string scheme = "ppm", method = "exact";
  std::optional<double> order, prior;
  auto* pie = app.add_subcommand("pie", "evaluate a single operating point");
  pie->add_option("--na", na, "mean signal photons per bin")->required();
  pie->add_option("--nb", nb, "mean background counts per bin");
  pie->add_option("--scheme", scheme, "ppm or ook")->required();
  pie->add_option("--order", order, "PPM order M (skip to optimize)");
  pie->add_option("--prior", prior, "OOK pulse prior q (skip to optimize)");
  pie->add_option("--method", method)->check(CLI::IsMember({"exact", "analytic"}));

  // sweep
  SweepSpec spec;
  std::vector<std::string> scheme_names = {"ppm", "ook"};
  std::vector<std::string> method_names = {"analytic", "numeric"};
  std::string out_path;
  auto* sweep = app.add_subcommand("sweep", "batch evaluation over an n_a grid, CSV output");
  sweep->add_option("--na-start", spec.na_start, "grid start")->required();
  sweep->add_option("--na-stop", spec.na_stop, "grid stop")->required();
  sweep->add_option("--points-per-decade", spec.points_per_decade, "grid density");
  sweep->add_option("--ratios", spec.noise_ratios, "noise ratios n_b/n_a");
  sweep->add_option("--schemes", scheme_names, "subset of {ppm, ook}");
  sweep->add_option("--methods", method_names, "subset of {analytic, numeric, montecarlo}");
  sweep->add_option("--frames", spec.mc_frames, "Monte Carlo frames per point");
  sweep->add_option("--seed", spec.seed, "Monte Carlo seed");
  sweep->add_option("--out", out_path, "output path (default: stdout)");

  // figure
  std::string figure_id;
  FigureConfig fig_cfg;
  std::string fig_out;
  auto* figure = app.add_subcommand("figure", "emit replot data for a named figure");
  figure->add_option("id", figure_id, "one of fig2b, fig3, fig5, fig6")->required();
  figure->add_option("--ratios", fig_cfg.noise_ratios, "noise-ratio legend values");
  figure->add_option("--points-per-decade", fig_cfg.points_per_decade, "grid density");
  figure->add_option("--out", fig_out, "output path (default: stdout)");

  // validate
  double v_na = 0.0, v_nb = 0.0, v_prior = 0.5;
  int v_order = 2;
  std::uint64_t v_frames = 1000000, v_seed = 1;
  std::string v_scheme = "ppm";
  auto* validate = app.add_subcommand("validate", "Monte Carlo cross-check of the exact MI");
  validate->add_option("--scheme", v_scheme, "ppm or ook")->required();
  validate->add_option("--na", v_na)->required();
  validate->add_option("--nb", v_nb);
  validate->add_option("--order", v_order, "PPM order M");
  validate->add_option("--prior", v_prior, "OOK pulse prior q");
  validate->add_option("--frames", v_frames, "frames to simulate");
  validate->add_option("--seed", v_seed, "RNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (pie->parsed()) return cmd_pie(na, nb, scheme, order, prior, method);
    if (sweep->parsed()) {
      spec.schemes.clear();
      for (const auto& s : scheme_names) spec.schemes.push_back(parse_scheme(s));
      spec.methods.clear();
      for (const auto& m : method_names) {
        if (m == "analytic") spec.methods.push_back(EvalMethod::analytic);
        else if (m == "numeric") spec.methods.push_back(EvalMethod::numeric);
        else if (m == "montecarlo") spec.methods.push_back(EvalMethod::montecarlo);
        else throw CLI::ValidationError("--methods", "unknown method " + m);
      }
      emit(sweep_csv(run_sweep(spec)), out_path);
      return 0;
    }
    if (figure->parsed()) {
      emit(figure_csv(figure_id, fig_cfg), fig_out);
      return 0;
    }
    if (validate->parsed()) {
      if (v_frames == 0) throw std::domain_error("frames must be >= 1");
      return cmd_validate(v_scheme, v_na, v_nb, v_order, v_prior, v_frames, v_seed);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
