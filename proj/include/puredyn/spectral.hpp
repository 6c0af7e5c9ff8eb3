#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "puredyn/operators.hpp"
#include "puredyn/series.hpp"
#include "puredyn/types.hpp"

namespace puredyn {

inline constexpr Index kDenseSolverCapacity = 16384;

/// Full eigendecomposition, energies ascending, eigenvectors as columns.
struct Spectrum {
  RealVector energies;
  RealMatrix vectors;

  Index dim() const { return energies.size(); }
  /// Standard deviation of the energies.
  double delta_E() const;
  /// Mean level spacing.
  double delta_e() const;
  double width() const { return energies[dim() - 1] - energies[0]; }
};

/// LAPACK divide-and-conquer route, or Eigen's solver when the linked LAPACK fails a
/// one-time self-check; throws CapacityError above `capacity`.
Spectrum diagonalize(const HermitianOperator& h, Index capacity = kDenseSolverCapacity);
Spectrum diagonalize(const RealMatrix& h, Index capacity = kDenseSolverCapacity);

/// Result of the LAPACK self-check used by diagonalize.
bool lapack_eigensolver_available();

/// Vᵀ diag(d) V: a diagonal working-basis observable in the energy eigenbasis.
RealMatrix to_eigenbasis(const Spectrum& spec, const RealVector& diag);
RealMatrix to_eigenbasis(const Spectrum& spec, const HermitianOperator& op);

struct BandProfile {
  std::vector<double> omega_edges;  // nbins+1
  std::vector<double> mean_sq;      // nbins
  std::vector<std::size_t> counts;  // off-diagonal pairs per bin
  double peak = 0.0;
  double bandwidth = 0.0;
  Index d_states = 0;
};

/// Binned mean |X_kl|² (k≠l) over ω = E_k − E_l on [−width, width].
BandProfile band_profile(const RealMatrix& x_eig, const Spectrum& spec, int nbins = 200, double threshold = 0.01);

struct PowerIterationOptions {
  int max_iterations = 200;
  double tolerance = 1e-8;
  std::uint64_t seed = 0x5eed;
};

/// ‖A‖ from the largest eigenvalue of the positive map v ↦ AᵀA v.
double norm_from_gram(const std::function<void(const RealVector&, RealVector&)>& gram, Index dim,
                      const PowerIterationOptions& opt = {});

double operator_norm(const HermitianOperator& a, const PowerIterationOptions& opt = {});
double commutator_norm(const HermitianOperator& h, const HermitianOperator& x, const PowerIterationOptions& opt = {});

/// ‖[H,X]‖ / (‖H‖‖X‖).
double commutator_ratio(const HermitianOperator& h, const HermitianOperator& x, const PowerIterationOptions& opt = {});

struct BandCommutatorReport {
  double commutator_norm = 0.0;  // ‖[H,X]‖ with H rescaled to spectrum [0,1]
  double band_width = 0.0;       // δE_band in the same units
  double observable_norm = 0.0;  // ‖X‖
  double bound = 0.0;            // δE_band·‖X‖
  double slack = 0.0;            // Frobenius norm of [H,X] restricted to |ω| > δE_band
  bool holds = false;            // commutator_norm ≤ bound + slack
};

/// Bandedness-implies-small-commutator check with H rescaled so E_min=0, E_max=1.
BandCommutatorReport check_band_commutator(const RealMatrix& x_eig, const Spectrum& spec, double threshold = 0.01,
                                           int nbins = 200);

/// Σ_kl |A_kl|² cos(ω_kl t) / Σ_kl |A_kl|².
DiagnosticSeries autocorrelation(const RealMatrix& a_eig, const Spectrum& spec, std::span<const double> times);

struct CorrelationPair {
  DiagnosticSeries observable;  // tr{X(t)X}/tr{X²}
  DiagnosticSeries projector;   // tr{Π_0(t)Π_0}/tr{Π_0}
};

/// Both autocorrelations for a coarse observable; throws EmptySubspaceError if x=0 is empty.
CorrelationPair correlation_functions(const CoarseObservable& obs, const Spectrum& spec, std::span<const double> times);

}  // namespace puredyn
