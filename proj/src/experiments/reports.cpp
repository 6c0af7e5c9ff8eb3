#include <algorithm>
#include <fstream>
#include <cmath>
#include <filesystem>
#include <json.hpp>

#include "puredyn/errors.hpp"
#include "puredyn/eth_synthetic.hpp"
#include "puredyn/experiments/runner.hpp"

namespace puredyn::experiments {

void write_basis_report(const Model& m, const std::string& dir) {
  std::filesystem::create_directories(dir);
  TableWriter t(dir + "/macrostates.csv", {"x", "V_x", "lambda_min", "lambda_max"});
  const auto& obs = m.observable;
  for (int x : obs.bins()) {
    double lo = INFINITY, hi = -INFINITY;
    for (Index i : obs.members(x)) {
      lo = std::min(lo, obs.lambda()[i]);
      hi = std::max(hi, obs.lambda()[i]);
    }
    t.row({std::to_string(x), std::to_string(obs.volume(x)), format_number(lo), format_number(hi)});
  }
}

void write_spectrum_report(const Model& m, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const Spectrum& spec = m.spectrum;
  {
    TableWriter t(dir + "/spectrum.csv", {"k", "energy"});
    for (Index k = 0; k < spec.dim(); ++k) t.row({std::to_string(k), format_number(spec.energies[k])});
  }
  const RealMatrix x_eig = to_eigenbasis(spec, m.observable.lambda());
  const BandProfile bp = band_profile(x_eig, spec, 200, m.cfg.time.threshold);
  {
    TableWriter t(dir + "/band_profile.csv", {"omega_lo", "omega_hi", "mean_sq", "pairs"});
    for (std::size_t b = 0; b < bp.mean_sq.size(); ++b)
      t.row({format_number(bp.omega_edges[b]), format_number(bp.omega_edges[b + 1]), format_number(bp.mean_sq[b]),
             std::to_string(bp.counts[b])});
  }
  const BandCommutatorReport bc = check_band_commutator(x_eig, spec, m.cfg.time.threshold);
  nlohmann::ordered_json j;
  j["dimension"] = spec.dim();
  j["energy_std"] = spec.delta_E();
  j["level_spacing"] = spec.delta_e();
  j["band_width"] = bp.bandwidth;
  j["band_states"] = bp.d_states;
  j["band_commutator"] = {{"commutator_norm", bc.commutator_norm}, {"band_width", bc.band_width},
                          {"observable_norm", bc.observable_norm}, {"bound", bc.bound},
                          {"slack", bc.slack}, {"holds", bc.holds}};
  j["commutator_ratio"] = commutator_ratio(m.hamiltonian, HermitianOperator::from_diagonal(m.observable.lambda(), "working"));

  const double horizon = 40.0 / spec.delta_E();
  const auto times = uniform_grid(0.0, horizon, static_cast<std::size_t>(m.cfg.time.grid_points));
  const SeriesKey key = series_key(m.cfg);
  {
    SeriesWriter w(dir + "/corr_observable.csv", key);
    DiagnosticSeries c = autocorrelation(x_eig, spec, times);
    c.name = "corr_observable";
    w.write(0, c);
  }
  if (m.observable.has(0)) {
    SeriesWriter w(dir + "/corr_projector.csv", key);
    w.write(0, correlation_functions(m.observable, spec, times).projector);
    const RealMatrix p_eig = to_eigenbasis(spec, m.observable.indicator(0));
    j["projector_band_width"] = band_profile(p_eig, spec, 200, m.cfg.time.threshold).bandwidth;
  }
  std::ofstream(dir + "/spectrum_report.json") << j.dump(2) << '\n';
}

std::vector<EthRow> run_eth_synth(const ScenarioConfig& cfg, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const auto& e = cfg.eth;
  if (e.macrostates < 2) throw ConfigError("eth.M", "q-terms need at least two macrostates");
  std::vector<EthRow> rows;
  TableWriter terms(dir + "/eth_terms.csv", {"D", "M", "d", "term", "magnitude", "seed"});
  TableWriter calib(dir + "/eth_calibration.csv", {"D", "M", "d", "x", "calibration_error", "seed"});
  TableWriter walk(dir + "/random_walk.csv", {"D", "mean", "std", "ratio", "seeds"});
  const Index dmax = *std::max_element(e.dims.begin(), e.dims.end());
  SynthOptions opt;
  opt.level_jitter = e.level_jitter;
  for (Index D : e.dims) {
    Index d = e.band;
    if (e.band_scales_with_sqrt_dim)
      d = std::max<Index>(1, static_cast<Index>(std::lround(e.band * std::sqrt(double(D) / double(dmax)))));
    for (int s = 0; s < e.seeds; ++s) {
      const std::uint64_t seed = kernels::derive_seed(cfg.root_seed, static_cast<std::uint64_t>(D) * 100003u + s);
      const SynthModel m = build_synth(D, e.macrostates, d, seed, opt);
      const double unit = 1.0 / (static_cast<double>(d) * m.delta_e);
      const QTerms q = estimate_q_terms(m, 1, 0, e.t1 * unit, e.t2 * unit);
      const std::pair<const char*, cplx> named[] = {{"q1", q.q1}, {"q2", q.q2}, {"q3", q.q3}, {"q4", q.q4},
                                                    {"total", q.total()}};
      for (const auto& [name, v] : named) {
        rows.push_back({D, e.macrostates, d, name, std::abs(v), seed});
        terms.row({std::to_string(D), std::to_string(e.macrostates), std::to_string(d), name,
                   format_number(std::abs(v)), std::to_string(seed)});
      }
      if (s == 0)
        for (int x = 0; x < e.macrostates; ++x)
          calib.row({std::to_string(D), std::to_string(e.macrostates), std::to_string(d), std::to_string(x),
                     format_number(m.calibration_error(x)), std::to_string(seed)});
    }
    const RandomWalkStats rw = random_walk_check(D, std::max(e.seeds, 2), cfg.root_seed);
    walk.row({std::to_string(D), format_number(rw.mean), format_number(rw.std), format_number(rw.ratio),
              std::to_string(std::max(e.seeds, 2))});
  }
  return rows;
}

}  // namespace puredyn::experiments
