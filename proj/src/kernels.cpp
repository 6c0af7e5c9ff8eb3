#include "puredyn/kernels.hpp"

#include <cmath>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace puredyn::kernels {

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(root), static_cast<std::uint32_t>(root >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

ComplexVector haar_vector(Index dim, std::uint64_t seed, std::uint64_t stream) {
  std::mt19937_64 gen(derive_seed(seed, stream));
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexVector v(dim);
  for (Index i = 0; i < dim; ++i) {
    const double re = normal(gen);
    const double im = normal(gen);
    v[i] = cplx(re, im);
  }
  v /= v.norm();
  return v;
}

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_thread_count(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

namespace {

template <class T>
void csr_apply_rows(const CsrMatrix& a, const T* in, T* out, Index begin, Index end) {
  for (Index r = begin; r < end; ++r) {
    T acc{};
    for (Index p = a.row_ptr[r]; p < a.row_ptr[r + 1]; ++p) acc += a.val[p] * in[a.col[p]];
    out[r] = acc;
  }
}

template <class T>
void csr_apply_omp(const CsrMatrix& a, const T* in, T* out) {
#pragma omp parallel for schedule(static)
  for (Index r = 0; r < a.rows; ++r) {
    T acc{};
    for (Index p = a.row_ptr[r]; p < a.row_ptr[r + 1]; ++p) acc += a.val[p] * in[a.col[p]];
    out[r] = acc;
  }
}

}  // namespace

namespace serial {

void csr_apply(const CsrMatrix& a, const cplx* in, cplx* out) { csr_apply_rows(a, in, out, 0, a.rows); }
void csr_apply(const CsrMatrix& a, const double* in, double* out) { csr_apply_rows(a, in, out, 0, a.rows); }

void transition_weights(const ComplexMatrix& u, const ComplexMatrix& psi, std::span<const Index> offsets,
                        std::vector<RealMatrix>& weights, RealMatrix& full) {
  const Index d = u.rows();
  const Index m = static_cast<Index>(offsets.size()) - 1;
  const Index nt = psi.cols();
  weights.assign(nt, RealMatrix::Zero(m, m));
  full = RealMatrix::Zero(m, nt);
  std::vector<cplx> v(d), total(d);
  for (Index t = 0; t < nt; ++t) {
    std::fill(total.begin(), total.end(), cplx{});
    for (Index y = 0; y < m; ++y) {
      std::fill(v.begin(), v.end(), cplx{});
      for (Index w = offsets[y]; w < offsets[y + 1]; ++w) {
        const cplx c = psi(w, t);
        for (Index z = 0; z < d; ++z) v[z] += u(z, w) * c;
      }
      for (Index x = 0; x < m; ++x) {
        double s = 0.0;
        for (Index z = offsets[x]; z < offsets[x + 1]; ++z) s += std::norm(v[z]);
        weights[t](x, y) = s;
      }
      for (Index z = 0; z < d; ++z) total[z] += v[z];
    }
    for (Index x = 0; x < m; ++x) {
      double s = 0.0;
      for (Index z = offsets[x]; z < offsets[x + 1]; ++z) s += std::norm(total[z]);
      full(x, t) = s;
    }
  }
}

RealVector cosine_phase_sum(const RealMatrix& a, const RealVector& e, std::span<const double> times) {
  RealVector out(static_cast<Index>(times.size()));
  for (std::size_t j = 0; j < times.size(); ++j) {
    double s = 0.0;
    for (Index l = 0; l < a.cols(); ++l)
      for (Index k = 0; k < a.rows(); ++k) s += a(k, l) * std::cos((e[k] - e[l]) * times[j]);
    out[static_cast<Index>(j)] = s;
  }
  return out;
}

RealVector haar_quadratic_samples(const ComplexMatrix& b, std::size_t n, std::uint64_t seed) {
  RealVector out(static_cast<Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const ComplexVector phi = haar_vector(b.cols(), seed, i);
    out[static_cast<Index>(i)] = (b * phi).squaredNorm();
  }
  return out;
}

}  // namespace serial

namespace parallel {

void csr_apply(const CsrMatrix& a, const cplx* in, cplx* out) { csr_apply_omp(a, in, out); }
void csr_apply(const CsrMatrix& a, const double* in, double* out) { csr_apply_omp(a, in, out); }

void transition_weights(const ComplexMatrix& u, const ComplexMatrix& psi, std::span<const Index> offsets,
                        std::vector<RealMatrix>& weights, RealMatrix& full) {
  const Index m = static_cast<Index>(offsets.size()) - 1;
  const Index nt = psi.cols();
  weights.assign(nt, RealMatrix::Zero(m, m));
  ComplexMatrix total = ComplexMatrix::Zero(u.rows(), nt);
  ComplexMatrix block;
  for (Index y = 0; y < m; ++y) {
    const Index vy = offsets[y + 1] - offsets[y];
    if (vy == 0) continue;
    block.noalias() = u.middleCols(offsets[y], vy) * psi.middleRows(offsets[y], vy);
    total += block;
#pragma omp parallel for schedule(static)
    for (Index t = 0; t < nt; ++t)
      for (Index x = 0; x < m; ++x)
        weights[t](x, y) = block.col(t).segment(offsets[x], offsets[x + 1] - offsets[x]).squaredNorm();
  }
  full.resize(m, nt);
#pragma omp parallel for schedule(static)
  for (Index t = 0; t < nt; ++t)
    for (Index x = 0; x < m; ++x)
      full(x, t) = total.col(t).segment(offsets[x], offsets[x + 1] - offsets[x]).squaredNorm();
}

RealVector cosine_phase_sum(const RealMatrix& a, const RealVector& e, std::span<const double> times) {
  const Index nt = static_cast<Index>(times.size());
  const Index d = e.size();
  // Re(u† A u) with u_k = exp(i e_k t) equals cᵀAc + sᵀAs for the symmetric part of A.
  const RealMatrix sym = 0.5 * (a + a.transpose());
  RealMatrix c(d, nt), s(d, nt);
#pragma omp parallel for schedule(static)
  for (Index j = 0; j < nt; ++j)
    for (Index k = 0; k < d; ++k) {
      c(k, j) = std::cos(e[k] * times[j]);
      s(k, j) = std::sin(e[k] * times[j]);
    }
  const RealMatrix ac = sym * c;
  const RealMatrix as = sym * s;
  RealVector out(nt);
#pragma omp parallel for schedule(static)
  for (Index j = 0; j < nt; ++j) out[j] = c.col(j).dot(ac.col(j)) + s.col(j).dot(as.col(j));
  return out;
}

RealVector haar_quadratic_samples(const ComplexMatrix& b, std::size_t n, std::uint64_t seed) {
  const Index ns = static_cast<Index>(n);
  ComplexMatrix phi(b.cols(), ns);
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < ns; ++i) phi.col(i) = haar_vector(b.cols(), seed, static_cast<std::uint64_t>(i));
  const ComplexMatrix img = b * phi;
  RealVector out(ns);
  for (Index i = 0; i < ns; ++i) out[i] = img.col(i).squaredNorm();
  return out;
}

}  // namespace parallel

}  // namespace puredyn::kernels
