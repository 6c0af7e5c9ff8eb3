#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "puredyn/operators.hpp"
#include "puredyn/propagation.hpp"
#include "puredyn/states.hpp"
#include "puredyn/time_reversal.hpp"

namespace puredyn::experiments {

enum class ModelKind { Xxz, CoupledIsing };
enum class VolumeRule { Exact, Effective };
enum class ThermalizationRule { Efold, Held };

const char* to_string(ModelKind k);

struct TimeConfig {
  double tau_divisor = 30.0;  // τ = t_th / tau_divisor
  double tf_multiple = 3.0;   // t_f = tf_multiple · t_th
  int grid_points = 200;      // intervals on [0, t_f]
  ThermalizationRule tth_rule = ThermalizationRule::Efold;
  double tth = 0.0;           // > 0 overrides the computed value
  double threshold = 0.01;
};

struct MarkovConfig {
  int x = 1;
  int y = 0;
  std::size_t samples = 200;
  double tau = 0.0;  // 0 uses the scenario τ
};

struct EthConfig {
  std::vector<Index> dims{512, 1024, 2048, 4096};
  int macrostates = 4;
  Index band = 64;
  bool band_scales_with_sqrt_dim = false;  // d = band·√(D/dims.back())
  int seeds = 50;
  double t1 = 1.0;  // in units of 1/(d δe)
  double t2 = 1.0;
  double level_jitter = 0.0;
};

struct SweepConfig {
  std::vector<int> sizes{8, 10, 12, 14};
  std::vector<std::string> modes{"1"};  // integer q or "half" for L/2
};

struct ScenarioConfig {
  std::string id = "scenario";
  ModelKind model = ModelKind::Xxz;
  int sites = 12;   // L for XXZ, total 2n for coupled Ising
  int mode = 1;     // q
  double delta_x = 0.74;
  IsingParams ising;
  PreparationRecipe recipe;
  TimeReversalKind theta = TimeReversalKind::ComplexConjugation;
  int ldb_from = 0;
  int ldb_to = 1;
  VolumeRule volumes = VolumeRule::Exact;
  TimeConfig time;
  PropagatorConfig propagation;
  MarkovConfig markov;
  int seed_count = 5;
  std::uint64_t root_seed = 1;
  SweepConfig sweep;
  EthConfig eth;
  std::string output_dir = "out";

  std::vector<std::uint64_t> seeds() const;
  /// Deterministic text form used for hashing and the manifest.
  std::string canonical() const;
};

/// Parse a YAML document; unknown keys and bad values raise ConfigError with their key path.
ScenarioConfig parse_config(const std::string& yaml_text);
ScenarioConfig load_config(const std::string& path);

/// Apply model-dependent validity rules (even L, q range, ...).
void validate(const ScenarioConfig& cfg);

}  // namespace puredyn::experiments
