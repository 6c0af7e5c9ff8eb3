#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "puredyn/basis.hpp"
#include "puredyn/diagnostics.hpp"
#include "puredyn/experiments/config.hpp"
#include "puredyn/experiments/csv.hpp"
#include "puredyn/experiments/fit.hpp"
#include "puredyn/markov_typicality.hpp"
#include "puredyn/spectral.hpp"
#include "puredyn/time_reversal.hpp"

namespace puredyn::experiments {

/// Hamiltonian, spectrum and coarse observable in the working basis of a scenario.
struct Model {
  ScenarioConfig cfg;
  std::optional<SectorBasis> basis;  // XXZ only
  HermitianOperator hamiltonian;
  Spectrum spectrum;
  ObservableSpectrum observable_spectrum;
  CoarseObservable observable;
  std::optional<TimeReversal> theta;
  Spectrum spec_a, spec_b;           // coupled Ising halves
  Index dim() const { return spectrum.dim(); }
};

/// Coupled Ising: the working basis is the eigenbasis of H_A ⊗ 1 + 1 ⊗ H_B.
/// `known` skips diagonalization when it already holds the spectrum of the same Hamiltonian
/// (the XXZ chain does not depend on q).
Model build_model(const ScenarioConfig& cfg, const Spectrum* known = nullptr);

/// Pure state for one seed following cfg.recipe.
PureState prepare_state(const Model& m, std::uint64_t seed);

/// Noise-free ensemble ρ̄ of the recipe in the energy eigenbasis (unit trace).
RealMatrix ensemble_density(const Model& m);

/// Dimension that entropy rescaling and effective volumes refer to.
double reference_dimension(const Model& m);

struct TimeScales {
  double t_th = 0.0;
  double tau = 0.0;
  double t_f = 0.0;
  std::vector<double> times;      // grid on [0, t_f]
  DiagnosticSeries ensemble;      // rescaled tr{X(t)ρ̄} on the probe grid
};

TimeScales time_scales(const Model& m, const std::vector<PureState>& states);

enum Diagnostic : unsigned {
  kExpectation = 1u << 0,
  kProbability = 1u << 1,
  kQuantumTau = 1u << 2,
  kMarkov = 1u << 3,
  kLdb = 1u << 4,
  kEntropy = 1u << 5,
  kAll = 0xffffu,
};

struct SeedResult {
  std::uint64_t seed = 0;
  RealMatrix probabilities;  // bins() × times
  std::map<std::string, DiagnosticSeries> series;
};

struct ScenarioResult {
  TimeScales scales;
  RealVector volumes;  // exact or effective, bins() order
  std::vector<SeedResult> seeds;
  std::optional<ConcentrationReport> concentration;
  /// Seed mean of the time average over [t_th, t_f].
  double late_average(const std::string& name) const;
};

ScenarioResult run_scenario(const Model& m, unsigned diagnostics);

/// Write every series in `r` plus manifest.json into dir.
void write_scenario(const Model& m, const ScenarioResult& r, const std::string& dir);

SeriesKey series_key(const ScenarioConfig& cfg);

/// SHA-256 hex digest.
std::string sha256_hex(const std::string& text);

struct SweepPoint {
  std::string diagnostic;
  std::string mode;
  int L = 0;
  Index D = 0;
  double value = 0.0;
};
struct SweepFit {
  std::string diagnostic;
  std::string mode;
  PowerLawFit fit;
};
struct SweepResult {
  std::vector<SweepPoint> points;
  std::vector<SweepFit> fits;
};

/// Q̄_τ and Δ̄ for each (L ≤ l_max, q mode); points are written as they complete.
SweepResult sweep(const ScenarioConfig& tmpl, const std::string& dir, int l_max = 14);

/// Fits for every (diagnostic, mode) group of a sweep_points.csv.
std::vector<SweepFit> fit_points(const std::vector<SweepPoint>& points);
std::vector<SweepPoint> read_sweep_points(const std::string& path);
void write_fits(const std::vector<SweepFit>& fits, const std::string& path);

}  // namespace puredyn::experiments

namespace puredyn::experiments {

/// Levels, band profile, commutator check and autocorrelations of the scenario's observable.
void write_spectrum_report(const Model& m, const std::string& dir);

/// Basis dimension and macrostate volumes.
void write_basis_report(const Model& m, const std::string& dir);

struct EthRow {
  Index D = 0;
  int M = 0;
  Index d = 0;
  std::string term;
  double magnitude = 0.0;
  std::uint64_t seed = 0;
};

/// q-term magnitudes over cfg.eth.dims × seeds plus calibration and random-walk tables.
std::vector<EthRow> run_eth_synth(const ScenarioConfig& cfg, const std::string& dir);

}  // namespace puredyn::experiments
