#include "puredyn/experiments/config.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

#include "puredyn/errors.hpp"
#include "puredyn/kernels.hpp"

namespace puredyn::experiments {

const char* to_string(ModelKind k) { return k == ModelKind::CoupledIsing ? "coupled-ising" : "xxz"; }

std::vector<std::uint64_t> ScenarioConfig::seeds() const {
  std::vector<std::uint64_t> s;
  for (int i = 0; i < seed_count; ++i) s.push_back(kernels::derive_seed(root_seed, static_cast<std::uint64_t>(i)));
  return s;
}

namespace {

using Node = YAML::Node;

void check_keys(const Node& n, const std::string& path, const std::set<std::string>& allowed) {
  if (!n.IsMap()) throw ConfigError(path.empty() ? "<root>" : path, "expected a table");
  for (const auto& kv : n) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) throw ConfigError(path.empty() ? key : path + "." + key, "unknown key");
  }
}

template <class T>
void read(const Node& n, const std::string& key, const std::string& path, T& out) {
  if (!n[key]) return;
  try {
    out = n[key].as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(path.empty() ? key : path + "." + key, "value has the wrong type");
  }
}

}  // namespace

ScenarioConfig parse_config(const std::string& yaml_text) {
  Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError("<root>", std::string("YAML parse error: ") + e.what());
  }
  ScenarioConfig c;
  if (root.IsNull()) return c;
  check_keys(root, "", {"scenario", "ising", "recipe", "theta", "ldb", "volumes", "time", "propagation", "markov",
                        "seeds", "sweep", "eth", "output"});

  if (const Node s = root["scenario"]) {
    check_keys(s, "scenario", {"id", "model", "L", "n", "q", "delta_x"});
    read(s, "id", "scenario", c.id);
    std::string model = to_string(c.model);
    read(s, "model", "scenario", model);
    if (model == "xxz") c.model = ModelKind::Xxz;
    else if (model == "coupled-ising") c.model = ModelKind::CoupledIsing;
    else throw ConfigError("scenario.model", "expected xxz or coupled-ising, got '" + model + "'");
    if (c.model == ModelKind::CoupledIsing) {
      c.delta_x = 0.5;
      c.ldb_to = -1;
      c.recipe.kind = RecipeKind::CanonicalProduct;
    }
    read(s, "L", "scenario", c.sites);
    if (s["n"]) {
      read(s, "n", "scenario", c.ising.n);
      c.sites = 2 * c.ising.n;
    } else if (c.model == ModelKind::CoupledIsing) {
      c.ising.n = c.sites / 2;
    }
    read(s, "q", "scenario", c.mode);
    read(s, "delta_x", "scenario", c.delta_x);
  }
  if (const Node s = root["ising"]) {
    check_keys(s, "ising", {"h_x", "h_z", "g_z", "coupling"});
    read(s, "h_x", "ising", c.ising.h_x);
    read(s, "h_z", "ising", c.ising.h_z);
    read(s, "g_z", "ising", c.ising.g_z);
    read(s, "coupling", "ising", c.ising.coupling);
  }
  if (const Node s = root["recipe"]) {
    check_keys(s, "recipe", {"kind", "kappa", "delta_p", "beta", "beta_a", "beta_b", "window_width"});
    if (s["kind"]) {
      std::string kind;
      read(s, "kind", "recipe", kind);
      try {
        c.recipe.kind = recipe_kind_from_string(kind);
      } catch (const DomainError& e) {
        throw ConfigError("recipe.kind", e.what());
      }
    }
    read(s, "kappa", "recipe", c.recipe.kappa);
    read(s, "delta_p", "recipe", c.recipe.delta_p);
    read(s, "beta", "recipe", c.recipe.beta);
    read(s, "beta_a", "recipe", c.recipe.beta_a);
    read(s, "beta_b", "recipe", c.recipe.beta_b);
    read(s, "window_width", "recipe", c.recipe.window_width);
  }
  if (root["theta"]) {
    std::string t;
    read(root, "theta", "", t);
    try {
      c.theta = time_reversal_from_string(t);
    } catch (const DomainError& e) {
      throw ConfigError("theta", e.what());
    }
  }
  if (const Node s = root["ldb"]) {
    check_keys(s, "ldb", {"from", "to"});
    read(s, "from", "ldb", c.ldb_from);
    read(s, "to", "ldb", c.ldb_to);
  }
  if (root["volumes"]) {
    std::string v;
    read(root, "volumes", "", v);
    if (v == "exact") c.volumes = VolumeRule::Exact;
    else if (v == "effective") c.volumes = VolumeRule::Effective;
    else throw ConfigError("volumes", "expected exact or effective");
  }
  if (const Node s = root["time"]) {
    check_keys(s, "time", {"tau_divisor", "tf_multiple", "grid_points", "tth_rule", "tth", "threshold"});
    read(s, "tau_divisor", "time", c.time.tau_divisor);
    read(s, "tf_multiple", "time", c.time.tf_multiple);
    read(s, "grid_points", "time", c.time.grid_points);
    read(s, "tth", "time", c.time.tth);
    read(s, "threshold", "time", c.time.threshold);
    if (s["tth_rule"]) {
      std::string r;
      read(s, "tth_rule", "time", r);
      if (r == "efold") c.time.tth_rule = ThermalizationRule::Efold;
      else if (r == "held") c.time.tth_rule = ThermalizationRule::Held;
      else throw ConfigError("time.tth_rule", "expected efold or held");
    }
  }
  if (const Node s = root["propagation"]) {
    check_keys(s, "propagation", {"mode", "krylov_dim", "step_tol", "max_substep"});
    if (s["mode"]) {
      std::string m;
      read(s, "mode", "propagation", m);
      if (m == "exact") c.propagation.mode = PropagationMode::ExactEigenbasis;
      else if (m == "krylov") c.propagation.mode = PropagationMode::Krylov;
      else throw ConfigError("propagation.mode", "expected exact or krylov");
    }
    read(s, "krylov_dim", "propagation", c.propagation.krylov_dim);
    read(s, "step_tol", "propagation", c.propagation.step_tol);
    read(s, "max_substep", "propagation", c.propagation.max_substep);
  }
  if (const Node s = root["markov"]) {
    check_keys(s, "markov", {"x", "y", "samples", "tau"});
    read(s, "x", "markov", c.markov.x);
    read(s, "y", "markov", c.markov.y);
    read(s, "samples", "markov", c.markov.samples);
    read(s, "tau", "markov", c.markov.tau);
  }
  if (const Node s = root["seeds"]) {
    check_keys(s, "seeds", {"count", "root"});
    read(s, "count", "seeds", c.seed_count);
    read(s, "root", "seeds", c.root_seed);
  }
  if (const Node s = root["sweep"]) {
    check_keys(s, "sweep", {"L", "q"});
    read(s, "L", "sweep", c.sweep.sizes);
    read(s, "q", "sweep", c.sweep.modes);
  }
  if (const Node s = root["eth"]) {
    check_keys(s, "eth", {"dims", "M", "d", "d_sqrt_scaling", "seeds", "t1", "t2", "level_jitter"});
    read(s, "dims", "eth", c.eth.dims);
    read(s, "M", "eth", c.eth.macrostates);
    read(s, "d", "eth", c.eth.band);
    read(s, "d_sqrt_scaling", "eth", c.eth.band_scales_with_sqrt_dim);
    read(s, "seeds", "eth", c.eth.seeds);
    read(s, "t1", "eth", c.eth.t1);
    read(s, "t2", "eth", c.eth.t2);
    read(s, "level_jitter", "eth", c.eth.level_jitter);
  }
  if (const Node s = root["output"]) {
    check_keys(s, "output", {"dir"});
    read(s, "dir", "output", c.output_dir);
  }
  validate(c);
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate(const ScenarioConfig& c) {
  if (c.model == ModelKind::Xxz) {
    if (c.sites < 4 || c.sites % 2 != 0) throw ConfigError("scenario.L", "XXZ chain needs an even L >= 4");
    if (c.mode < 1 || c.mode > c.sites / 2) throw ConfigError("scenario.q", "q must lie in [1, L/2]");
  } else {
    if (c.ising.n < 2) throw ConfigError("scenario.n", "coupled Ising chains need n >= 2");
  }
  if (!(c.delta_x > 0.0)) throw ConfigError("scenario.delta_x", "must be positive");
  if (c.seed_count < 1) throw ConfigError("seeds.count", "must be at least 1");
  if (c.time.grid_points < 2) throw ConfigError("time.grid_points", "must be at least 2");
  if (!(c.time.tau_divisor > 0.0)) throw ConfigError("time.tau_divisor", "must be positive");
  if (!(c.time.tf_multiple > 1.0)) throw ConfigError("time.tf_multiple", "must exceed 1");
  if (!(c.time.threshold > 0.0 && c.time.threshold < 1.0)) throw ConfigError("time.threshold", "must lie in (0,1)");
  if (c.time.tth < 0.0) throw ConfigError("time.tth", "must be non-negative");
  if (c.propagation.krylov_dim < 4) throw ConfigError("propagation.krylov_dim", "must be at least 4");
  if (!(c.propagation.step_tol > 0.0)) throw ConfigError("propagation.step_tol", "must be positive");
  if (c.markov.samples < 30) throw ConfigError("markov.samples", "must be at least 30");
  if (c.recipe.kind == RecipeKind::CanonicalProduct && c.model != ModelKind::CoupledIsing)
    throw ConfigError("recipe.kind", "canonical-product states need the coupled-ising model");
  if (c.recipe.kind == RecipeKind::GaussianRandom && c.time.tth <= 0.0)
    throw ConfigError("time.tth", "gaussian-random states do not relax; set an explicit thermalization time");
  for (std::size_t i = 0; i < c.sweep.sizes.size(); ++i)
    if (i > 0 && c.sweep.sizes[i] <= c.sweep.sizes[i - 1])
      throw ConfigError("sweep.L", "sizes must be strictly ascending");
  for (const auto& m : c.sweep.modes)
    if (m != "half" && m.find_first_not_of("0123456789") != std::string::npos)
      throw ConfigError("sweep.q", "entries must be integers or 'half'");
  if (c.eth.dims.empty()) throw ConfigError("eth.dims", "must not be empty");
  if (c.eth.macrostates < 1) throw ConfigError("eth.M", "must be at least 1");
  if (c.eth.band < 1) throw ConfigError("eth.d", "must be at least 1");
  if (c.eth.seeds < 1) throw ConfigError("eth.seeds", "must be at least 1");
}

std::string ScenarioConfig::canonical() const {
  YAML::Emitter e;
  e << YAML::BeginMap;
  e << YAML::Key << "scenario" << YAML::Value << YAML::BeginMap << YAML::Key << "id" << YAML::Value << id
    << YAML::Key << "model" << YAML::Value << to_string(model) << YAML::Key << "L" << YAML::Value << sites
    << YAML::Key << "q" << YAML::Value << mode << YAML::Key << "delta_x" << YAML::Value << delta_x << YAML::EndMap;
  e << YAML::Key << "ising" << YAML::Value << YAML::BeginMap << YAML::Key << "n" << YAML::Value << ising.n
    << YAML::Key << "h_x" << YAML::Value << ising.h_x << YAML::Key << "h_z" << YAML::Value << ising.h_z
    << YAML::Key << "g_z" << YAML::Value << ising.g_z << YAML::Key << "coupling" << YAML::Value << ising.coupling
    << YAML::EndMap;
  e << YAML::Key << "recipe" << YAML::Value << YAML::BeginMap << YAML::Key << "kind" << YAML::Value
    << to_string(recipe.kind) << YAML::Key << "kappa" << YAML::Value << recipe.kappa << YAML::Key << "delta_p"
    << YAML::Value << recipe.delta_p << YAML::Key << "beta" << YAML::Value << recipe.beta << YAML::Key << "beta_a"
    << YAML::Value << recipe.beta_a << YAML::Key << "beta_b" << YAML::Value << recipe.beta_b << YAML::Key
    << "window_width" << YAML::Value << recipe.window_width << YAML::EndMap;
  e << YAML::Key << "theta" << YAML::Value << to_string(theta);
  e << YAML::Key << "ldb" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "from" << YAML::Value
    << ldb_from << YAML::Key << "to" << YAML::Value << ldb_to << YAML::EndMap;
  e << YAML::Key << "volumes" << YAML::Value << (volumes == VolumeRule::Effective ? "effective" : "exact");
  e << YAML::Key << "time" << YAML::Value << YAML::BeginMap << YAML::Key << "tau_divisor" << YAML::Value
    << time.tau_divisor << YAML::Key << "tf_multiple" << YAML::Value << time.tf_multiple << YAML::Key
    << "grid_points" << YAML::Value << time.grid_points << YAML::Key << "tth_rule" << YAML::Value
    << (time.tth_rule == ThermalizationRule::Held ? "held" : "efold") << YAML::Key << "tth" << YAML::Value
    << time.tth << YAML::Key << "threshold" << YAML::Value << time.threshold << YAML::EndMap;
  e << YAML::Key << "propagation" << YAML::Value << YAML::BeginMap << YAML::Key << "mode" << YAML::Value
    << (propagation.mode == PropagationMode::Krylov ? "krylov" : "exact") << YAML::Key << "krylov_dim"
    << YAML::Value << propagation.krylov_dim << YAML::Key << "step_tol" << YAML::Value << propagation.step_tol
    << YAML::EndMap;
  e << YAML::Key << "markov" << YAML::Value << YAML::BeginMap << YAML::Key << "x" << YAML::Value << markov.x
    << YAML::Key << "y" << YAML::Value << markov.y << YAML::Key << "samples" << YAML::Value << markov.samples
    << YAML::Key << "tau" << YAML::Value << markov.tau << YAML::EndMap;
  e << YAML::Key << "seeds" << YAML::Value << YAML::BeginMap << YAML::Key << "count" << YAML::Value << seed_count
    << YAML::Key << "root" << YAML::Value << root_seed << YAML::EndMap;
  e << YAML::Key << "sweep" << YAML::Value << YAML::BeginMap << YAML::Key << "L" << YAML::Value << YAML::Flow
    << sweep.sizes << YAML::Key << "q" << YAML::Value << YAML::Flow << sweep.modes << YAML::EndMap;
  e << YAML::Key << "eth" << YAML::Value << YAML::BeginMap << YAML::Key << "dims" << YAML::Value << YAML::Flow
    << eth.dims << YAML::Key << "M" << YAML::Value << eth.macrostates << YAML::Key << "d" << YAML::Value << eth.band
    << YAML::Key << "d_sqrt_scaling" << YAML::Value << eth.band_scales_with_sqrt_dim << YAML::Key << "seeds"
    << YAML::Value << eth.seeds << YAML::Key << "t1" << YAML::Value << eth.t1 << YAML::Key << "t2" << YAML::Value
    << eth.t2 << YAML::Key << "level_jitter" << YAML::Value << eth.level_jitter << YAML::EndMap;
  e << YAML::EndMap;
  return e.c_str();
}

}  // namespace puredyn::experiments
