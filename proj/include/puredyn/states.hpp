#pragma once

#include <cstdint>
#include <string>

#include "puredyn/operators.hpp"
#include "puredyn/propagation.hpp"
#include "puredyn/spectral.hpp"

namespace puredyn {

enum class RecipeKind { GaussianRandom, Tilted, TwoSubspace, MicrocanonicalWindow, CanonicalProduct };

const char* to_string(RecipeKind k);
RecipeKind recipe_kind_from_string(const std::string& s);

struct PreparationRecipe {
  RecipeKind kind = RecipeKind::Tilted;
  double kappa = 0.1;
  double delta_p = 0.2;
  double beta = 0.0;
  double beta_a = 0.1;
  double beta_b = -0.1;
  double window_width = 0.0;  // 0 selects the default width for the chain length
  std::uint64_t seed = 1;

  std::string describe() const;
};

/// Real and imaginary parts i.i.d. standard normal, then normalized.
PureState gaussian_random_state(Index dim, std::uint64_t seed);

/// ψ ∝ e^{−κλ/2} ψ_R for a diagonal observable λ.
PureState tilted_state(const PureState& base, const RealVector& lambda, double kappa);

/// √p0 Π_a ψ¹/|Π_a ψ¹| + √p1 Π_b ψ²/|Π_b ψ²| with p0 = (1+δp)/2 on bins a, b.
PureState two_subspace_state(const CoarseObservable& obs, double delta_p, std::uint64_t seed0, std::uint64_t seed1,
                             int label0 = 0, int label1 = 1);

/// tr(e^{−βH}H)/tr(e^{−βH}).
double canonical_energy(const Spectrum& spec, double beta);

/// Energy-window width 3√(L/20).
double default_window_width(int sites);

/// Eigenbasis indices with |E − E(β)| ≤ width/2.
std::vector<Index> energy_window(const Spectrum& spec, double beta, double width);

/// Window projector applied after the tilt e^{−κλ/2} on a Gaussian state.
PureState microcanonical_window_state(const Spectrum& spec, double beta, double width, const RealVector& lambda,
                                      double kappa, std::uint64_t seed);

/// Product of e^{−β H/2}-weighted Gaussian states, in the product eigenbasis (index α·dim_b + β).
PureState canonical_product_state(const Spectrum& spec_a, const Spectrum& spec_b, double beta_a, double beta_b,
                                  std::uint64_t seed_a, std::uint64_t seed_b);

}  // namespace puredyn
