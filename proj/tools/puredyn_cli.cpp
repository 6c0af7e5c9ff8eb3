#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "puredyn/errors.hpp"
#include "puredyn/experiments/config.hpp"
#include "puredyn/experiments/runner.hpp"
#include "puredyn/kernels.hpp"

namespace ex = puredyn::experiments;

namespace {

struct Options {
  std::string config;
  std::string out;
  long long seed = -1;
  int threads = 0;
  int l_max = 14;
};

ex::ScenarioConfig resolve(const Options& o) {
  ex::ScenarioConfig c = o.config.empty() ? ex::parse_config("") : ex::load_config(o.config);
  if (!o.out.empty()) c.output_dir = o.out;
  if (o.seed >= 0) c.root_seed = static_cast<std::uint64_t>(o.seed);
  if (o.threads > 0) puredyn::kernels::set_thread_count(o.threads);
  if (c.model == ex::ModelKind::Xxz && c.sites > o.l_max)
    throw puredyn::ConfigError("scenario.L", "L = " + std::to_string(c.sites) + " exceeds --l-max " +
                                                 std::to_string(o.l_max));
  return c;
}

void run_diagnostics(const Options& o, unsigned which) {
  const auto cfg = resolve(o);
  const auto model = ex::build_model(cfg);
  const auto result = ex::run_scenario(model, which);
  ex::write_scenario(model, result, cfg.output_dir);
  std::printf("D=%lld t_th=%.6g tau=%.6g t_f=%.6g -> %s\n", static_cast<long long>(model.dim()), result.scales.t_th,
              result.scales.tau, result.scales.t_f, cfg.output_dir.c_str());
  for (const auto& [name, unused] : result.seeds.front().series)
    if (name.rfind("probability", 0) != 0 && name != "expectation")
      std::printf("  late average %-18s %.6g\n", name.c_str(), result.late_average(name));
}

int run(int argc, char** argv) {
  CLI::App app{"Pure-state macrostate dynamics: classicality, Markovianity and detailed balance diagnostics"};
  app.require_subcommand(1);
  Options o;
  auto common = [&o](CLI::App* sub) {
    sub->add_option("--config", o.config, "YAML scenario file");
    sub->add_option("--out", o.out, "output directory (overrides output.dir)");
    sub->add_option("--seed", o.seed, "root seed (overrides seeds.root)");
    sub->add_option("--threads", o.threads, "OpenMP threads");
    sub->add_option("--l-max", o.l_max, "largest chain length allowed");
  };
  auto* basis = app.add_subcommand("basis-info", "sector dimension and macrostate volumes");
  auto* spectrum = app.add_subcommand("spectrum", "levels, band profile and autocorrelations");
  auto* classicality = app.add_subcommand("classicality", "Q_tau series");
  auto* markov = app.add_subcommand("markov", "Markov residual and concentration of transition probabilities");
  auto* ldb = app.add_subcommand("ldb", "local detailed balance residual");
  auto* entropy = app.add_subcommand("entropy", "observational entropy");
  auto* eth = app.add_subcommand("eth-synth", "synthetic banded projector model");
  auto* sweep = app.add_subcommand("sweep", "chain-length sweep with power-law fits");
  auto* fit = app.add_subcommand("fit", "refit sweep_points.csv in --out");
  for (auto* s : {basis, spectrum, classicality, markov, ldb, entropy, eth, sweep, fit}) common(s);
  CLI11_PARSE(app, argc, argv);

  if (basis->parsed()) {
    const auto cfg = resolve(o);
    const auto m = ex::build_model(cfg);
    ex::write_basis_report(m, cfg.output_dir);
    std::printf("model=%s L=%d D=%lld macrostates=%lld\n", ex::to_string(cfg.model), cfg.sites,
                static_cast<long long>(m.dim()), static_cast<long long>(m.observable.macrostate_count()));
    for (int x : m.observable.bins())
      std::printf("  x=%+d V=%lld\n", x, static_cast<long long>(m.observable.volume(x)));
  } else if (spectrum->parsed()) {
    const auto cfg = resolve(o);
    ex::write_spectrum_report(ex::build_model(cfg), cfg.output_dir);
    std::printf("spectrum report -> %s\n", cfg.output_dir.c_str());
  } else if (classicality->parsed()) {
    run_diagnostics(o, ex::kExpectation | ex::kProbability | ex::kQuantumTau);
  } else if (markov->parsed()) {
    run_diagnostics(o, ex::kProbability | ex::kMarkov);
  } else if (ldb->parsed()) {
    run_diagnostics(o, ex::kProbability | ex::kLdb);
  } else if (entropy->parsed()) {
    run_diagnostics(o, ex::kExpectation | ex::kProbability | ex::kEntropy);
  } else if (eth->parsed()) {
    const auto cfg = resolve(o);
    const auto rows = ex::run_eth_synth(cfg, cfg.output_dir);
    std::printf("%zu q-term rows -> %s\n", rows.size(), cfg.output_dir.c_str());
  } else if (sweep->parsed()) {
    const auto cfg = resolve(o);
    const auto r = ex::sweep(cfg, cfg.output_dir, o.l_max);
    for (const auto& f : r.fits)
      std::printf("%-10s q=%-5s alpha=%.4f +- %.4f (%zu points)\n", f.diagnostic.c_str(), f.mode.c_str(),
                  f.fit.alpha, f.fit.alpha_stderr, f.fit.points);
  } else if (fit->parsed()) {
    const std::string dir = o.out.empty() ? "out" : o.out;
    const auto fits = ex::fit_points(ex::read_sweep_points(dir + "/sweep_points.csv"));
    ex::write_fits(fits, dir + "/sweep_fits.csv");
    for (const auto& f : fits)
      std::printf("%-10s q=%-5s alpha=%.4f +- %.4f (%zu points)\n", f.diagnostic.c_str(), f.mode.c_str(),
                  f.fit.alpha, f.fit.alpha_stderr, f.fit.points);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const puredyn::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const puredyn::CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << '\n';
    return 3;
  } catch (const puredyn::EmptySubspaceError& e) {
    std::cerr << "empty subspace: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
