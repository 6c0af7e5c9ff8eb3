#pragma once

#include <string>

#include "puredyn/basis.hpp"
#include "puredyn/operators.hpp"
#include "puredyn/propagation.hpp"
#include "puredyn/spectral.hpp"

namespace puredyn {

enum class TimeReversalKind { ComplexConjugation, SpinFlip };

const char* to_string(TimeReversalKind k);
TimeReversalKind time_reversal_from_string(const std::string& s);

/// Anti-unitary Θ = P·K with P a real signed permutation of the working basis.
/// ComplexConjugation: P = 1. SpinFlip: P = ∏_ℓ iσ_y^ℓ restricted to the sector,
/// which sends |z⟩ to (−1)^{#up(z)} |−z⟩.
class TimeReversal {
 public:
  /// Conjugation in an arbitrary real working basis of dimension dim.
  explicit TimeReversal(Index dim);
  /// Either kind on a spin-sector basis.
  TimeReversal(TimeReversalKind kind, const SectorBasis& basis);

  TimeReversalKind kind() const { return kind_; }
  Index dim() const { return static_cast<Index>(target_.size()); }

  PureState apply(const PureState& psi) const;
  /// Θ H Θ⁻¹ for a real symmetric H.
  HermitianOperator transform(const HermitianOperator& h) const;
  /// x' with Θ Π_x Θ⁻¹ = Π_x'.
  int map_label(int x) const { return kind_ == TimeReversalKind::SpinFlip ? -x : x; }

  Index target(Index i) const { return target_[static_cast<std::size_t>(i)]; }
  double sign(Index i) const { return sign_[static_cast<std::size_t>(i)]; }

 private:
  TimeReversalKind kind_;
  std::vector<Index> target_;
  std::vector<double> sign_;
};

/// |tr{Π_x U_τ Π_y U_τ†} − tr{Π_y' U^TR_τ Π_x' U^TR_τ†}| where U^TR evolves under Θ H Θ⁻¹
/// (diagonalized independently) and primes are Θ-mapped labels.
double symmetry_identity_residual(const Spectrum& spec, const Spectrum& spec_reversed, const CoarseObservable& obs,
                                  const TimeReversal& theta, int x, int y, double tau);

}  // namespace puredyn
