#pragma once

#include <cstdint>
#include <vector>

#include "puredyn/types.hpp"

namespace puredyn {

/// Square matrix with entries only for |i − j| ≤ half_width, stored row by row.
class BandedMatrix {
 public:
  BandedMatrix() = default;
  BandedMatrix(Index n, Index half_width);

  Index size() const { return n_; }
  Index half_width() const { return b_; }
  cplx& at(Index i, Index j) { return data_[static_cast<std::size_t>(i * (2 * b_ + 1) + (j - i + b_))]; }
  cplx get(Index i, Index j) const;

  BandedMatrix operator*(const BandedMatrix& o) const;
  /// diag(left) · A · diag(right).
  BandedMatrix scaled(const ComplexVector& left, const ComplexVector& right) const;
  /// Σ_ij A_ij B_ji.
  cplx trace_product(const BandedMatrix& o) const;
  cplx trace() const;
  RealMatrix real_dense() const;

 private:
  Index n_ = 0;
  Index b_ = 0;
  std::vector<cplx> data_;
};

struct SynthOptions {
  double level_jitter = 0.0;  // c_k in units of δe; 0 keeps exactly equal spacing
  double random_scale = 1.0;  // multiplies every pseudorandom part; 0 gives a purely diagonal bank
};

/// Banded projector-ETH bank: (Π_x)_kℓ = δ_kℓ V_x/D + F_x R_kℓ(x)/√D for |k−ℓ| < d.
struct SynthModel {
  Index D = 0;
  int M = 0;
  Index d = 0;
  std::uint64_t seed = 0;
  double delta_e = 0.0;
  RealVector energies;
  std::vector<Index> volumes;
  std::vector<double> envelope;     // F_x
  std::vector<BandedMatrix> random_parts;  // F_x R(x)/√D
  std::size_t band_entries = 0;     // #{(k,ℓ): |k−ℓ| < d}

  BandedMatrix member(int x) const;  // full bank entry
  double calibration_error(int x) const;  // |tr Π_x²/V_x − 1|
  double resolution_deviation() const;    // max |Σ_x Π_x − 1| elementwise
};

/// Step-function envelope with F_x² = V_x(1 − V_x/D)·D/#band, so that E tr Π_x² = V_x.
SynthModel build_synth(Index D, int M, Index d, std::uint64_t seed, const SynthOptions& opt = {});

struct QTerms {
  cplx q1, q2, q3, q4;
  cplx total() const { return q1 + q2 + q3 + q4; }
};

/// The four contraction patterns of q(x2,x0) with interval durations t1, t2 (x0 ≠ x2).
QTerms estimate_q_terms(const SynthModel& m, int x2, int x0, double t1, double t2);

struct RandomWalkStats {
  double mean = 0.0;
  double std = 0.0;
  double ratio = 0.0;  // std/√D
};

/// Spread over seeds of Σ_k R_kk for standard normal diagonals.
RandomWalkStats random_walk_check(Index D, int seeds, std::uint64_t root_seed);

}  // namespace puredyn
