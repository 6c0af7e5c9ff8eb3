#include "puredyn/experiments/runner.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <sstream>

#include "puredyn/errors.hpp"
#include "puredyn/states.hpp"

namespace puredyn::experiments {

namespace {

constexpr const char* kCodeVersion = "puredyn 1.0.0";

HermitianOperator coupled_hamiltonian(const Spectrum& a, const Spectrum& b, const IsingParams& p) {
  const RealVector za = pauli_z_diagonal(p.n, p.n);
  const RealMatrix zae = to_eigenbasis(a, za);
  const RealMatrix zbe = to_eigenbasis(b, za);
  const Index na = a.dim(), nb = b.dim();
  if (na * nb > kDenseSolverCapacity)
    throw CapacityError("coupled dimension " + std::to_string(na * nb) + " exceeds dense solver capacity " +
                        std::to_string(kDenseSolverCapacity));
  RealMatrix h(na * nb, na * nb);
  for (Index i = 0; i < na; ++i)
    for (Index j = 0; j < na; ++j) h.block(i * nb, j * nb, nb, nb) = p.coupling * zae(i, j) * zbe;
  for (Index i = 0; i < na; ++i)
    for (Index k = 0; k < nb; ++k) h(i * nb + k, i * nb + k) += a.energies[i] + b.energies[k];
  return HermitianOperator::from_dense(std::move(h), "coupled-ising product eigenbasis", SpinConvention::Pauli);
}

double window_width(const ScenarioConfig& c) {
  return c.recipe.window_width > 0.0 ? c.recipe.window_width : default_window_width(c.sites);
}

DiagnosticSeries named(DiagnosticSeries s, const std::string& name, double tau) {
  s.name = name;
  s.tau = tau;
  return s;
}

std::string label_tag(int x) { return x < 0 ? "m" + std::to_string(-x) : std::to_string(x); }

}  // namespace

Model build_model(const ScenarioConfig& cfg, const Spectrum* known) {
  validate(cfg);
  Model m;
  m.cfg = cfg;
  if (cfg.model == ModelKind::Xxz) {
    m.basis.emplace(cfg.sites);
    m.hamiltonian = build_xxz(*m.basis);
    m.observable_spectrum = build_density_wave(*m.basis, cfg.mode);
    m.theta.emplace(cfg.theta, *m.basis);
  } else {
    if (cfg.theta == TimeReversalKind::SpinFlip)
      throw ConfigError("theta", "the rotated time reversal is defined for the XXZ chain only");
    const auto& p = cfg.ising;
    m.spec_a = diagonalize(build_tilted_ising(p.n, p.h_x, p.h_z, p.g_z));
    m.spec_b = m.spec_a;
    m.hamiltonian = coupled_hamiltonian(m.spec_a, m.spec_b, p);
    m.observable_spectrum = build_energy_difference(m.spec_a.energies, m.spec_b.energies);
    m.theta.emplace(m.hamiltonian.dim());
  }
  if (known) {
    if (known->dim() != m.hamiltonian.dim()) throw DomainError("reused spectrum has the wrong dimension");
    m.spectrum = *known;
  } else {
    m.spectrum = diagonalize(m.hamiltonian);
  }
  m.observable = coarse_grain(m.observable_spectrum, cfg.delta_x);
  return m;
}

PureState prepare_state(const Model& m, std::uint64_t seed) {
  const auto& r = m.cfg.recipe;
  const RealVector& lambda = m.observable.lambda();
  switch (r.kind) {
    case RecipeKind::GaussianRandom:
      return gaussian_random_state(m.dim(), seed);
    case RecipeKind::Tilted:
      return tilted_state(gaussian_random_state(m.dim(), seed), lambda, r.kappa);
    case RecipeKind::TwoSubspace:
      return two_subspace_state(m.observable, r.delta_p, kernels::derive_seed(seed, 0), kernels::derive_seed(seed, 1));
    case RecipeKind::MicrocanonicalWindow:
      return microcanonical_window_state(m.spectrum, r.beta, window_width(m.cfg), lambda, r.kappa, seed);
    case RecipeKind::CanonicalProduct: {
      // The product state lives in the product eigenbasis, which is the working basis here.
      return canonical_product_state(m.spec_a, m.spec_b, r.beta_a, r.beta_b, kernels::derive_seed(seed, 0),
                                     kernels::derive_seed(seed, 1));
    }
  }
  throw DomainError("unknown recipe");
}

RealMatrix ensemble_density(const Model& m) {
  const auto& r = m.cfg.recipe;
  const RealVector& lambda = m.observable.lambda();
  const Index d = m.dim();
  RealVector w;
  switch (r.kind) {
    case RecipeKind::GaussianRandom:
      w = RealVector::Ones(d);
      break;
    case RecipeKind::Tilted:
    case RecipeKind::MicrocanonicalWindow:
      w = (-r.kappa * (lambda.array() - lambda.minCoeff())).exp();
      break;
    case RecipeKind::TwoSubspace: {
      w = RealVector::Zero(d);
      const double p0 = 0.5 * (1.0 + r.delta_p), p1 = 0.5 * (1.0 - r.delta_p);
      for (Index i : m.observable.members(0)) w[i] = p0 / m.observable.volume(0);
      for (Index i : m.observable.members(1)) w[i] = p1 / m.observable.volume(1);
      break;
    }
    case RecipeKind::CanonicalProduct: {
      const auto& ea = m.spec_a.energies;
      const auto& eb = m.spec_b.energies;
      w.resize(d);
      for (Index i = 0; i < ea.size(); ++i)
        for (Index k = 0; k < eb.size(); ++k)
          w[i * eb.size() + k] = std::exp(-r.beta_a * (ea[i] - ea.mean()) - r.beta_b * (eb[k] - eb.mean()));
      break;
    }
  }
  RealMatrix rho = to_eigenbasis(m.spectrum, w);
  if (r.kind == RecipeKind::MicrocanonicalWindow) {
    RealVector mask = RealVector::Zero(d);
    for (Index k : energy_window(m.spectrum, r.beta, window_width(m.cfg))) mask[k] = 1.0;
    rho = mask.asDiagonal() * rho * mask.asDiagonal();
  }
  return rho / rho.trace();
}

double reference_dimension(const Model& m) {
  if (m.cfg.recipe.kind == RecipeKind::MicrocanonicalWindow)
    return static_cast<double>(energy_window(m.spectrum, m.cfg.recipe.beta, window_width(m.cfg)).size());
  return static_cast<double>(m.dim());
}

TimeScales time_scales(const Model& m, const std::vector<PureState>& states) {
  const auto& tc = m.cfg.time;
  TimeScales s;
  if (tc.tth > 0.0) {
    s.t_th = tc.tth;
  } else if (tc.tth_rule == ThermalizationRule::Efold) {
    const RealMatrix rho = ensemble_density(m);
    const double eq = diagonal_ensemble_value(m.spectrum, m.observable.lambda(), rho);
    for (double horizon = 16.0;; horizon *= 4.0) {
      const auto grid = uniform_grid(0.0, horizon, 512);
      s.ensemble = rescaled(ensemble_expectation(m.spectrum, m.observable.lambda(), rho, grid), eq);
      s.ensemble.name = "ensemble_expectation";
      try {
        s.t_th = efold_thermalization_time(s.ensemble, tc.threshold);
        break;
      } catch (const HorizonError&) {
        if (horizon > 5000.0) throw;
      }
    }
  } else {
    const ExactPropagator prop(m.spectrum);
    const RealMatrix xd = m.spectrum.vectors.array().square().matrix().transpose() * m.observable.lambda();
    for (double horizon = 64.0;; horizon *= 4.0) {
      const auto grid = uniform_grid(0.0, horizon, 1024);
      std::vector<DiagnosticSeries> curves;
      for (const auto& psi : states) {
        const ComplexMatrix traj = prop.trajectory(psi, grid);
        DiagnosticSeries c;
        c.times = grid;
        for (Index t = 0; t < traj.cols(); ++t)
          c.values.push_back(traj.col(t).cwiseAbs2().dot(m.observable.lambda()));
        const ComplexVector ce = m.spectrum.vectors.transpose().cast<cplx>() * psi.amplitudes;
        curves.push_back(rescaled(c, ce.cwiseAbs2().dot(xd.col(0))));
      }
      try {
        s.t_th = thermalization_time(curves, tc.threshold);
        break;
      } catch (const HorizonError&) {
        if (horizon > 5000.0) throw;
      }
    }
  }
  s.tau = s.t_th / tc.tau_divisor;
  s.t_f = tc.tf_multiple * s.t_th;
  s.times = uniform_grid(0.0, s.t_f, static_cast<std::size_t>(tc.grid_points));
  return s;
}

double ScenarioResult::late_average(const std::string& name) const {
  double total = 0.0;
  for (const auto& sr : seeds) total += time_average(sr.series.at(name), scales.t_th, scales.t_f);
  return total / static_cast<double>(seeds.size());
}

ScenarioResult run_scenario(const Model& m, unsigned diagnostics) {
  const auto& cfg = m.cfg;
  const auto& obs = m.observable;
  ScenarioResult r;
  std::vector<PureState> states;
  for (auto seed : cfg.seeds()) states.push_back(prepare_state(m, seed));
  r.scales = time_scales(m, states);
  const auto& times = r.scales.times;
  const double tau = r.scales.tau;
  const double dref = reference_dimension(m);

  const bool needs_step = diagnostics & (kQuantumTau | kMarkov | kLdb);
  if (diagnostics & kLdb) {
    obs.require_bin(cfg.ldb_from);
    obs.require_bin(cfg.ldb_to);
    obs.require_bin(m.theta->map_label(cfg.ldb_from));
    obs.require_bin(m.theta->map_label(cfg.ldb_to));
  }
  std::optional<MacroPropagator> mp;
  RealMatrix kernel;
  if (needs_step) mp.emplace(m.spectrum, obs, tau);
  if (diagnostics & kMarkov) kernel = mp->haar_kernel();

  const ExactPropagator prop(m.spectrum);
  const auto seeds = cfg.seeds();
  for (std::size_t si = 0; si < states.size(); ++si) {
    SeedResult sr;
    sr.seed = seeds[si];
    const ComplexMatrix traj = prop.trajectory(states[si], times);
    sr.probabilities = bin_probabilities(traj, obs);
    const RealVector vol = cfg.volumes == VolumeRule::Effective
                               ? effective_volumes(sr.probabilities, times, r.scales.t_th, r.scales.t_f, dref)
                               : exact_volumes(obs);
    if (si == 0) r.volumes = vol;
    if (diagnostics & kExpectation) {
      DiagnosticSeries e;
      e.times = times;
      for (Index t = 0; t < traj.cols(); ++t) e.values.push_back(traj.col(t).cwiseAbs2().dot(obs.lambda()));
      sr.series["expectation"] = named(e, "expectation", 0.0);
    }
    if (diagnostics & kProbability) {
      for (Index b = 0; b < obs.macrostate_count(); ++b) {
        DiagnosticSeries p;
        p.times = times;
        for (Index t = 0; t < sr.probabilities.cols(); ++t) p.values.push_back(sr.probabilities(b, t));
        const std::string name = "probability_x" + label_tag(obs.bins()[static_cast<std::size_t>(b)]);
        sr.series[name] = named(p, name, 0.0);
      }
    }
    if (needs_step) {
      const auto step = mp->step(sort_rows(traj, obs));
      if (diagnostics & kQuantumTau) sr.series["Q_tau"] = named(quantum_tau_series(step, times, tau), "Q_tau", tau);
      if (diagnostics & kMarkov)
        sr.series["markov_residual"] =
            named(markov_residual(step, kernel, times, tau), "markov_residual", tau);
      if (diagnostics & kLdb)
        sr.series["ldb_delta"] =
            named(ldb_series(step, times, obs, *m.theta, cfg.ldb_from, cfg.ldb_to, vol), "ldb_delta", tau);
    }
    if (diagnostics & kEntropy) {
      const auto s = entropy_series(sr.probabilities, times, vol);
      sr.series["entropy"] = named(s, "entropy", 0.0);
      sr.series["entropy_rescaled"] = named(rescaled_entropy(s, dref), "entropy_rescaled", 0.0);
    }
    r.seeds.push_back(std::move(sr));
  }
  if (diagnostics & kMarkov) {
    const double mtau = cfg.markov.tau > 0.0 ? cfg.markov.tau : tau;
    const MacroPropagator mpc(m.spectrum, obs, mtau);
    r.concentration = sample_P(mpc, cfg.markov.x, cfg.markov.y, cfg.markov.samples,
                               kernels::derive_seed(cfg.root_seed, 0xC0CC));
  }
  return r;
}

SeriesKey series_key(const ScenarioConfig& cfg) {
  SeriesKey k;
  k.scenario_id = cfg.id;
  k.model = to_string(cfg.model);
  k.L = cfg.sites;
  k.q = cfg.model == ModelKind::Xxz ? cfg.mode : 0;
  k.delta_x = cfg.delta_x;
  k.recipe_kind = to_string(cfg.recipe.kind);
  k.kappa = cfg.recipe.kappa;
  k.theta = to_string(cfg.theta);
  return k;
}

std::string sha256_hex(const std::string& text) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw NumericalError("SHA-256 digest failed");
  std::ostringstream os;
  for (unsigned i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

namespace {

const char* unit_of(const std::string& name) {
  if (name == "expectation" || name == "ensemble_expectation") return "X in units of its standard deviation";
  if (name == "entropy") return "nats";
  return "dimensionless";
}

nlohmann::ordered_json base_manifest(const ScenarioConfig& cfg) {
  nlohmann::ordered_json j;
  const std::string canon = cfg.canonical();
  j["code_version"] = kCodeVersion;
  j["config_sha256"] = sha256_hex(canon);
  j["config"] = canon;
  j["seeds"] = cfg.seeds();
  j["time_unit"] = "hbar = 1 simulation units";
  return j;
}

void write_json(const std::string& path, const nlohmann::ordered_json& j) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

}  // namespace

void write_scenario(const Model& m, const ScenarioResult& r, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const SeriesKey key = series_key(m.cfg);
  auto j = base_manifest(m.cfg);
  j["dimension"] = m.dim();
  j["reference_dimension"] = reference_dimension(m);
  j["grid"] = {{"t0", 0.0}, {"t_f", r.scales.t_f}, {"points", r.scales.times.size()}};
  j["t_th"] = r.scales.t_th;
  j["tau"] = r.scales.tau;
  nlohmann::ordered_json vols = nlohmann::ordered_json::object();
  for (Index b = 0; b < m.observable.macrostate_count(); ++b)
    vols[std::to_string(m.observable.bins()[static_cast<std::size_t>(b)])] = r.volumes[b];
  j["volumes"] = vols;
  j["volume_rule"] = m.cfg.volumes == VolumeRule::Effective ? "effective (first seed shown)" : "exact";
  nlohmann::ordered_json files = nlohmann::ordered_json::object();

  if (!r.scales.ensemble.times.empty()) {
    SeriesWriter w(dir + "/ensemble_expectation.csv", key);
    w.write(0, r.scales.ensemble);
    files["ensemble_expectation.csv"] = {{"value", "rescaled ensemble expectation, dimensionless"},
                                         {"t", "hbar = 1 simulation units"}};
  }
  if (!r.seeds.empty()) {
    for (const auto& [name, unused] : r.seeds.front().series) {
      SeriesWriter w(dir + "/" + name + ".csv", key);
      for (const auto& sr : r.seeds) w.write(sr.seed, sr.series.at(name));
      files[name + ".csv"] = {{"value", unit_of(name)}, {"t", "hbar = 1 simulation units"},
                              {"tau", "hbar = 1 simulation units"}};
    }
  }
  if (r.concentration) {
    const auto& c = *r.concentration;
    TableWriter t(dir + "/concentration.csv",
                  {"x", "y", "tau", "V_y", "mean_P", "sample_mean", "sample_std", "n_samples", "epsilon",
                   "exceedance", "levy_bound"});
    for (double eps : {0.01, 0.02, 0.05, 0.1, 0.2, 0.5}) {
      t.row({std::to_string(c.x), std::to_string(c.y), format_number(c.tau), std::to_string(c.volume_y),
             format_number(c.mean_P), format_number(c.sample_mean), format_number(c.sample_std),
             std::to_string(c.n_samples), format_number(eps), format_number(c.exceedance(eps)),
             format_number(levy_bound(eps, c.mean_P, static_cast<double>(c.volume_y)))});
    }
    files["concentration.csv"] = {{"tau", "hbar = 1 simulation units"}, {"other", "dimensionless"}};
  }
  j["files"] = files;
  write_json(dir + "/manifest.json", j);
}

std::vector<SweepFit> fit_points(const std::vector<SweepPoint>& points) {
  std::vector<std::pair<std::string, std::string>> groups;
  for (const auto& p : points) {
    const auto g = std::make_pair(p.diagnostic, p.mode);
    if (std::find(groups.begin(), groups.end(), g) == groups.end()) groups.push_back(g);
  }
  std::vector<SweepFit> fits;
  for (const auto& [diag, mode] : groups) {
    std::vector<double> d, v;
    for (const auto& p : points)
      if (p.diagnostic == diag && p.mode == mode) {
        d.push_back(static_cast<double>(p.D));
        v.push_back(p.value);
      }
    if (d.size() < 3) continue;
    fits.push_back({diag, mode, fit_alpha(d, v)});
  }
  if (fits.empty()) throw DomainError("no (diagnostic, q) group has the 3 points a fit needs");
  return fits;
}

std::vector<SweepPoint> read_sweep_points(const std::string& path) {
  const CsvTable t = read_csv(path);
  const auto cd = t.column("diagnostic"), cm = t.column("q"), cl = t.column("L"), cD = t.column("D"),
             cv = t.column("value");
  std::vector<SweepPoint> out;
  for (const auto& row : t.rows)
    out.push_back({row[cd], row[cm], std::stoi(row[cl]), static_cast<Index>(std::stoll(row[cD])), std::stod(row[cv])});
  return out;
}

void write_fits(const std::vector<SweepFit>& fits, const std::string& path) {
  TableWriter t(path, {"diagnostic", "q", "alpha", "alpha_stderr", "intercept", "points"});
  for (const auto& f : fits)
    t.row({f.diagnostic, f.mode, format_number(f.fit.alpha), format_number(f.fit.alpha_stderr),
           format_number(f.fit.intercept), std::to_string(f.fit.points)});
}

SweepResult sweep(const ScenarioConfig& tmpl, const std::string& dir, int l_max) {
  if (tmpl.model != ModelKind::Xxz) throw ConfigError("scenario.model", "sweeps run over XXZ chain lengths");
  std::filesystem::create_directories(dir);
  SweepResult res;
  auto j = base_manifest(tmpl);
  nlohmann::ordered_json skipped = nlohmann::ordered_json::array();
  nlohmann::ordered_json runs = nlohmann::ordered_json::array();
  TableWriter points(dir + "/sweep_points.csv", {"diagnostic", "q", "L", "D", "value"});
  auto record = [&](const SweepPoint& p) {
    res.points.push_back(p);
    points.row({p.diagnostic, p.mode, std::to_string(p.L), std::to_string(p.D), format_number(p.value)});
  };
  Spectrum spectrum_for_L;
  try {
    for (int L : tmpl.sweep.sizes) {
      if (L > l_max) {
        skipped.push_back({{"L", L}, {"reason", "above --l-max"}});
        continue;
      }
      for (const auto& mode : tmpl.sweep.modes) {
        ScenarioConfig c = tmpl;
        c.sites = L;
        c.mode = mode == "half" ? L / 2 : std::stoi(mode);
        c.id = tmpl.id + "-L" + std::to_string(L) + "-q" + mode;
        const Model m = build_model(c, spectrum_for_L.dim() == static_cast<Index>(sector_dimension(L)) ? &spectrum_for_L : nullptr);
        spectrum_for_L = m.spectrum;
        const auto& obs = m.observable;
        const bool ldb_ok = obs.has(c.ldb_from) && obs.has(c.ldb_to) && obs.has(m.theta->map_label(c.ldb_from)) &&
                            obs.has(m.theta->map_label(c.ldb_to));
        if (!ldb_ok) skipped.push_back({{"L", L}, {"q", mode}, {"diagnostic", "ldb_delta"},
                                        {"reason", "empty macrostate subspace"}});
        const auto r = run_scenario(m, kQuantumTau | (ldb_ok ? unsigned(kLdb) : 0u));
        record({"Q_tau", mode, L, m.dim(), r.late_average("Q_tau")});
        if (ldb_ok) record({"ldb_delta", mode, L, m.dim(), r.late_average("ldb_delta")});
        runs.push_back({{"id", c.id}, {"L", L}, {"q", c.mode}, {"t_th", r.scales.t_th}, {"tau", r.scales.tau}});
      }
    }
  } catch (...) {
    j["runs"] = runs;
    j["skipped"] = skipped;
    j["status"] = "aborted";
    write_json(dir + "/manifest.json", j);
    throw;
  }
  j["runs"] = runs;
  j["skipped"] = skipped;
  res.fits = fit_points(res.points);
  write_fits(res.fits, dir + "/sweep_fits.csv");
  j["status"] = "complete";
  write_json(dir + "/manifest.json", j);
  return res;
}

}  // namespace puredyn::experiments
