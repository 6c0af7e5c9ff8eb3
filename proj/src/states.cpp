#include "puredyn/states.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "puredyn/errors.hpp"

namespace puredyn {

const char* to_string(RecipeKind k) {
  switch (k) {
    case RecipeKind::GaussianRandom: return "gaussian-random";
    case RecipeKind::Tilted: return "tilted";
    case RecipeKind::TwoSubspace: return "two-subspace";
    case RecipeKind::MicrocanonicalWindow: return "microcanonical-window";
    case RecipeKind::CanonicalProduct: return "canonical-product";
  }
  return "?";
}

RecipeKind recipe_kind_from_string(const std::string& s) {
  for (RecipeKind k : {RecipeKind::GaussianRandom, RecipeKind::Tilted, RecipeKind::TwoSubspace,
                       RecipeKind::MicrocanonicalWindow, RecipeKind::CanonicalProduct})
    if (s == to_string(k)) return k;
  throw DomainError("unknown recipe kind '" + s + "'");
}

std::string PreparationRecipe::describe() const {
  std::ostringstream os;
  os << to_string(kind);
  switch (kind) {
    case RecipeKind::Tilted: os << " kappa=" << kappa; break;
    case RecipeKind::TwoSubspace: os << " delta_p=" << delta_p; break;
    case RecipeKind::MicrocanonicalWindow: os << " beta=" << beta << " width=" << window_width << " kappa=" << kappa; break;
    case RecipeKind::CanonicalProduct: os << " beta_a=" << beta_a << " beta_b=" << beta_b; break;
    default: break;
  }
  os << " seed=" << seed;
  return os.str();
}

PureState gaussian_random_state(Index dim, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  PureState s;
  s.amplitudes.resize(dim);
  for (Index i = 0; i < dim; ++i) {
    const double re = normal(gen);
    const double im = normal(gen);
    s.amplitudes[i] = cplx(re, im);
  }
  s.normalize();
  s.recipe = "gaussian-random seed=" + std::to_string(seed);
  return s;
}

PureState tilted_state(const PureState& base, const RealVector& lambda, double kappa) {
  if (lambda.size() != base.dim()) throw DomainError("observable and state dimensions differ");
  PureState s;
  s.amplitudes = base.amplitudes.array() * (-0.5 * kappa * lambda.array()).exp().cast<cplx>();
  s.normalize();
  std::ostringstream os;
  os << "tilted kappa=" << kappa << " <- " << base.recipe;
  s.recipe = os.str();
  return s;
}

PureState two_subspace_state(const CoarseObservable& obs, double delta_p, std::uint64_t seed0, std::uint64_t seed1,
                             int label0, int label1) {
  if (!(delta_p >= -1.0 && delta_p <= 1.0)) throw DomainError("delta_p must lie in [-1, 1]");
  const auto& m0 = obs.members(label0);
  const auto& m1 = obs.members(label1);
  const double p0 = 0.5 * (1.0 + delta_p);
  const double p1 = 0.5 * (1.0 - delta_p);
  const PureState r0 = gaussian_random_state(obs.dim(), seed0);
  const PureState r1 = gaussian_random_state(obs.dim(), seed1);
  auto block_norm = [](const PureState& r, const std::vector<Index>& m) {
    double s = 0.0;
    for (Index i : m) s += std::norm(r.amplitudes[i]);
    return std::sqrt(s);
  };
  const double n0 = block_norm(r0, m0);
  const double n1 = block_norm(r1, m1);
  PureState s;
  s.amplitudes = ComplexVector::Zero(obs.dim());
  for (Index i : m0) s.amplitudes[i] = std::sqrt(p0) * r0.amplitudes[i] / n0;
  for (Index i : m1) s.amplitudes[i] = std::sqrt(p1) * r1.amplitudes[i] / n1;
  s.normalize();
  std::ostringstream os;
  os << "two-subspace delta_p=" << delta_p << " seeds=" << seed0 << "," << seed1;
  s.recipe = os.str();
  return s;
}

double canonical_energy(const Spectrum& spec, double beta) {
  // Shift by the extremal energy so the weights cannot overflow.
  const double ref = beta >= 0 ? spec.energies.minCoeff() : spec.energies.maxCoeff();
  const RealVector w = (-beta * (spec.energies.array() - ref)).exp();
  return w.dot(spec.energies) / w.sum();
}

double default_window_width(int sites) { return 3.0 * std::sqrt(sites / 20.0); }

std::vector<Index> energy_window(const Spectrum& spec, double beta, double width) {
  if (!(width > 0.0)) throw DomainError("energy window width must be positive");
  const double centre = canonical_energy(spec, beta);
  std::vector<Index> idx;
  for (Index k = 0; k < spec.dim(); ++k)
    if (std::abs(spec.energies[k] - centre) <= 0.5 * width) idx.push_back(k);
  return idx;
}

PureState microcanonical_window_state(const Spectrum& spec, double beta, double width, const RealVector& lambda,
                                      double kappa, std::uint64_t seed) {
  const std::vector<Index> window = energy_window(spec, beta, width);
  if (window.empty()) throw EmptySubspaceError("energy window contains no eigenstates");
  const PureState tilted = tilted_state(gaussian_random_state(spec.dim(), seed), lambda, kappa);
  const ComplexVector c = spec.vectors.transpose().cast<cplx>() * tilted.amplitudes;
  ComplexVector kept = ComplexVector::Zero(c.size());
  for (Index k : window) kept[k] = c[k];
  if (kept.norm() == 0.0) throw EmptySubspaceError("state has no weight inside the energy window");
  PureState s;
  s.amplitudes = spec.vectors.cast<cplx>() * kept;
  s.normalize();
  std::ostringstream os;
  os << "microcanonical-window beta=" << beta << " width=" << width << " kappa=" << kappa << " seed=" << seed;
  s.recipe = os.str();
  return s;
}

PureState canonical_product_state(const Spectrum& spec_a, const Spectrum& spec_b, double beta_a, double beta_b,
                                  std::uint64_t seed_a, std::uint64_t seed_b) {
  auto weighted = [](const Spectrum& spec, double beta, std::uint64_t seed) {
    ComplexVector c = gaussian_random_state(spec.dim(), seed).amplitudes;
    const double ref = beta >= 0 ? spec.energies.minCoeff() : spec.energies.maxCoeff();
    c.array() *= (-0.5 * beta * (spec.energies.array() - ref)).exp().cast<cplx>();
    return c;
  };
  const ComplexVector a = weighted(spec_a, beta_a, seed_a);
  const ComplexVector b = weighted(spec_b, beta_b, seed_b);
  PureState s;
  s.amplitudes.resize(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) s.amplitudes.segment(i * b.size(), b.size()) = a[i] * b;
  s.normalize();
  std::ostringstream os;
  os << "canonical-product beta_a=" << beta_a << " beta_b=" << beta_b << " seeds=" << seed_a << "," << seed_b;
  s.recipe = os.str();
  return s;
}

}  // namespace puredyn
