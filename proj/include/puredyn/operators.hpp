#pragma once

#include <optional>
#include <string>
#include <vector>

#include "puredyn/basis.hpp"
#include "puredyn/kernels.hpp"
#include "puredyn/types.hpp"

namespace puredyn {

enum class SpinConvention { None, HalfSpin, Pauli };

const char* to_string(SpinConvention c);

/// Real symmetric matrix in either compressed-row or dense storage.
class HermitianOperator {
 public:
  HermitianOperator() = default;
  static HermitianOperator from_csr(CsrMatrix m, std::string basis_tag, SpinConvention conv = SpinConvention::None);
  static HermitianOperator from_dense(RealMatrix m, std::string basis_tag, SpinConvention conv = SpinConvention::None);
  static HermitianOperator from_diagonal(const RealVector& diag, std::string basis_tag);

  Index dim() const { return dim_; }
  bool is_sparse() const { return sparse_; }
  const CsrMatrix& csr() const { return csr_; }
  const RealMatrix& dense() const { return dense_; }
  RealMatrix to_dense() const;

  void apply(const ComplexVector& in, ComplexVector& out) const;
  void apply(const RealVector& in, RealVector& out) const;
  ComplexVector operator*(const ComplexVector& v) const;
  double expectation(const ComplexVector& v) const;
  double trace() const;

  /// Largest |H_ij − H_ji|.
  double max_asymmetry() const;
  bool hermitian() const { return hermitian_; }

  const std::string& basis_tag() const { return basis_tag_; }
  SpinConvention convention() const { return convention_; }

  /// a·H + b·1, same storage kind.
  HermitianOperator affine(double a, double b) const;

 private:
  Index dim_ = 0;
  bool sparse_ = true;
  bool hermitian_ = true;
  CsrMatrix csr_;
  RealMatrix dense_;
  std::string basis_tag_;
  SpinConvention convention_ = SpinConvention::None;
};

struct MatrixEntry {
  Index row;
  Index col;
  double value;
};

/// Assemble an n×n CSR matrix from unsorted entries, summing duplicates.
CsrMatrix csr_from_entries(Index n, std::vector<MatrixEntry> entries);

/// Periodic XXZ chain, s = σ/2: Σ_ℓ s_x s_x + s_y s_y + 3/2 s_z s_z (ℓ,ℓ+1) + 1/2 s_z s_z (ℓ,ℓ+2).
HermitianOperator build_xxz(const SectorBasis& basis);

/// Eigenvalue map of a diagonal observable, normalized to unit second central moment.
struct ObservableSpectrum {
  RealVector lambda;
  double norm_const = 1.0;
};

/// X_q = 𝒩⁻¹ Σ_ℓ cos(2πℓq/L) s_z^ℓ on the sector basis.
ObservableSpectrum build_density_wave(const SectorBasis& basis, int q);

/// (e_α − e_β)/𝒩 on the product eigenbasis, index α·dim_b + β.
ObservableSpectrum build_energy_difference(const RealVector& energies_a, const RealVector& energies_b);

/// Unit second central moment normalization of raw eigenvalues.
ObservableSpectrum normalize_observable(RealVector raw);

/// x = sgn(λ)·round-half-toward-zero(|λ|/δX); symmetric under λ → −λ.
int macrostate_label(double lambda, double delta_x);

/// Coarse-grained diagonal observable: labels, memberships, volumes.
class CoarseObservable {
 public:
  CoarseObservable() = default;
  CoarseObservable(const ObservableSpectrum& spec, double delta_x);

  Index dim() const { return lambda_.size(); }
  const RealVector& lambda() const { return lambda_; }
  double delta_x() const { return delta_x_; }
  double norm_const() const { return norm_const_; }

  int label_of(Index i) const { return labels_[static_cast<std::size_t>(i)]; }
  /// Nonempty macrostate labels in ascending order.
  const std::vector<int>& bins() const { return bins_; }
  Index macrostate_count() const { return static_cast<Index>(bins_.size()); }
  std::optional<Index> bin_index(int x) const;
  Index require_bin(int x) const;  // throws EmptySubspaceError
  bool has(int x) const { return bin_index(x).has_value(); }
  Index volume(int x) const;
  Index volume_at(Index b) const { return offsets_[b + 1] - offsets_[b]; }
  const std::vector<Index>& members(int x) const;
  RealVector indicator(int x) const;

  /// State indices sorted by bin; bin b occupies order()[offsets()[b] .. offsets()[b+1]).
  const std::vector<Index>& order() const { return order_; }
  const std::vector<Index>& offsets() const { return offsets_; }
  /// bin position of each state index
  const std::vector<Index>& bin_of_state() const { return bin_of_state_; }

 private:
  RealVector lambda_;
  double delta_x_ = 0.0;
  double norm_const_ = 1.0;
  std::vector<int> labels_;
  std::vector<int> bins_;
  std::vector<std::vector<Index>> members_;
  std::vector<Index> order_;
  std::vector<Index> offsets_;
  std::vector<Index> bin_of_state_;
};

CoarseObservable coarse_grain(const ObservableSpectrum& spec, double delta_x);

struct IsingParams {
  int n = 4;
  double h_x = 1.0;
  double h_z = 0.5;
  double g_z = 1.0;
  double coupling = 0.5;
};

/// Single periodic chain h_x Σσ_x + h_z Σσ_z + g_z Σσ_zσ_z on 2^n states.
HermitianOperator build_tilted_ising(int n, double h_x, double h_z, double g_z);

/// σ_z on a site of an n-site chain, diagonal in the computational basis.
RealVector pauli_z_diagonal(int n, int site);

/// H_A + H_B + λ σ_z^(n,A) σ_z^(n,B) on 2^{2n} states, index a·2^n + b.
HermitianOperator build_coupled_ising(const IsingParams& p);

/// Transverse chain Σσ_z + Σσ_xσ_x (periodic) on 2^L states and its total magnetization Σσ_z.
struct MagnetizationExample {
  HermitianOperator hamiltonian;
  HermitianOperator magnetization;
};
MagnetizationExample build_magnetization_example(int sites);

}  // namespace puredyn
