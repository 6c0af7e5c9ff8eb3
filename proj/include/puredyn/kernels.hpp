#pragma once

// Data-parallel hot loops. Each kernel has an OpenMP/blocked implementation in
// `parallel` and a plain loop implementation in `serial` that is kept as the
// reference for tests and benchmarks. The unqualified names forward to `parallel`.

#include <cstdint>
#include <span>
#include <vector>

#include "puredyn/types.hpp"

namespace puredyn {

/// Real compressed-row matrix with sorted column indices per row.
struct CsrMatrix {
  Index rows = 0;
  Index cols = 0;
  std::vector<Index> row_ptr;
  std::vector<Index> col;
  std::vector<double> val;

  Index nonzeros() const { return static_cast<Index>(val.size()); }
};

namespace kernels {

namespace serial {
void csr_apply(const CsrMatrix& a, const cplx* in, cplx* out);
void csr_apply(const CsrMatrix& a, const double* in, double* out);

/// U and psi are ordered so that macrostate b occupies rows offsets[b]..offsets[b+1].
/// weights[t](x,y) = |Π_x U Π_y psi_t|², full(x,t) = |Π_x U psi_t|².
void transition_weights(const ComplexMatrix& u, const ComplexMatrix& psi, std::span<const Index> offsets,
                        std::vector<RealMatrix>& weights, RealMatrix& full);

/// values[j] = Σ_kl a_kl cos((e_k − e_l) t_j).
RealVector cosine_phase_sum(const RealMatrix& a, const RealVector& e, std::span<const double> times);

/// |B φ_i|² for n Haar-random unit vectors φ_i in C^{cols(B)}; sample i seeded from (seed, i).
RealVector haar_quadratic_samples(const ComplexMatrix& b, std::size_t n, std::uint64_t seed);
}  // namespace serial

namespace parallel {
void csr_apply(const CsrMatrix& a, const cplx* in, cplx* out);
void csr_apply(const CsrMatrix& a, const double* in, double* out);
void transition_weights(const ComplexMatrix& u, const ComplexMatrix& psi, std::span<const Index> offsets,
                        std::vector<RealMatrix>& weights, RealMatrix& full);
RealVector cosine_phase_sum(const RealMatrix& a, const RealVector& e, std::span<const double> times);
RealVector haar_quadratic_samples(const ComplexMatrix& b, std::size_t n, std::uint64_t seed);
}  // namespace parallel

using parallel::cosine_phase_sum;
using parallel::csr_apply;
using parallel::haar_quadratic_samples;
using parallel::transition_weights;

/// Unit vector with i.i.d. complex Gaussian components drawn from (seed, stream).
ComplexVector haar_vector(Index dim, std::uint64_t seed, std::uint64_t stream);

/// Deterministic child seed for stream index `stream` of a root seed.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream);

int thread_count();
void set_thread_count(int n);

}  // namespace kernels
}  // namespace puredyn
