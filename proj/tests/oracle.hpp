#pragma once

// Dense literal-formula references built from Kronecker products and matrix
// exponentials. Nothing here calls into the library's kernels or propagators.

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <vector>

#include "puredyn/basis.hpp"
#include "puredyn/operators.hpp"
#include "puredyn/types.hpp"

namespace oracle {

using puredyn::cplx;
using puredyn::ComplexMatrix;
using puredyn::ComplexVector;
using puredyn::Index;
using puredyn::RealMatrix;
using puredyn::RealVector;

inline RealMatrix pauli_x() { return (RealMatrix(2, 2) << 0, 1, 1, 0).finished(); }
inline RealMatrix pauli_z() { return (RealMatrix(2, 2) << 1, 0, 0, -1).finished(); }
// σ_y = i·(this), kept real: σ_y ⊗ σ_y = −(Y ⊗ Y) with Y = [[0,−1],[1,0]].
inline RealMatrix pauli_y_over_i() { return (RealMatrix(2, 2) << 0, -1, 1, 0).finished(); }

/// Single-site operator op on `site` of an L-site chain; site 0 is the least significant bit.
inline RealMatrix site_op(const RealMatrix& op, int site, int sites) {
  RealMatrix out = RealMatrix::Identity(1, 1);
  for (int s = sites - 1; s >= 0; --s) {
    const RealMatrix f = s == site ? op : RealMatrix::Identity(2, 2);
    RealMatrix k = Eigen::kroneckerProduct(out, f).eval();
    out = k;
  }
  return out;
}

/// Bit 1 is spin up, eigenvalue +1 of σ_z; in the computational basis |0⟩ = (1,0)ᵀ is up for σ_z,
/// so flip the z sign convention to put up on bit value 1.
inline RealMatrix sz_site(int site, int sites) { return -0.5 * site_op(pauli_z(), site, sites); }

/// Periodic XXZ chain from Pauli tensor products on the full 2^L space.
inline RealMatrix xxz_full(int sites) {
  const Index n = Index(1) << sites;
  RealMatrix h = RealMatrix::Zero(n, n);
  for (int l = 0; l < sites; ++l) {
    const int r = (l + 1) % sites, r2 = (l + 2) % sites;
    h += 0.25 * site_op(pauli_x(), l, sites) * site_op(pauli_x(), r, sites);
    h -= 0.25 * site_op(pauli_y_over_i(), l, sites) * site_op(pauli_y_over_i(), r, sites);
    h += 1.5 * sz_site(l, sites) * sz_site(r, sites);
    h += 0.5 * sz_site(l, sites) * sz_site(r2, sites);
  }
  return h;
}

/// Rows/columns of a full-space matrix restricted to the sector words.
inline RealMatrix restrict_to_sector(const RealMatrix& full, const puredyn::SectorBasis& basis) {
  const auto words = basis.configs();
  const Index d = static_cast<Index>(words.size());
  RealMatrix out(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) out(i, j) = full(static_cast<Index>(words[i]), static_cast<Index>(words[j]));
  return out;
}

/// e^{−iHt} by the matrix exponential.
inline ComplexMatrix evolution(const RealMatrix& h, double t) {
  const ComplexMatrix a = (cplx(0.0, -t) * h.cast<cplx>()).eval();
  return a.exp();
}

/// Diagonal 0/1 projector for macrostate x.
inline RealMatrix projector(const puredyn::CoarseObservable& obs, int x) {
  return obs.indicator(x).asDiagonal();
}

inline double norm2(const ComplexVector& v) { return v.squaredNorm(); }

/// Literal two-time probabilities in bins() order: first(x1), joint(x2,x1), unmeasured(x2).
struct TwoTime {
  RealVector first;
  RealMatrix joint;
  RealVector unmeasured;
};

inline TwoTime two_time(const RealMatrix& h, const puredyn::CoarseObservable& obs, const ComplexVector& psi, double t1,
                        double t2) {
  const auto& bins = obs.bins();
  const Index m = static_cast<Index>(bins.size());
  const ComplexMatrix u1 = evolution(h, t1);
  const ComplexMatrix u2 = evolution(h, t2 - t1);
  const ComplexVector psi1 = u1 * psi;
  TwoTime r;
  r.first.resize(m);
  r.joint.resize(m, m);
  r.unmeasured.resize(m);
  const ComplexVector psi2 = u2 * psi1;
  for (Index a = 0; a < m; ++a) {
    const ComplexMatrix pa = projector(obs, bins[a]).cast<cplx>();
    r.first[a] = norm2(pa * psi1);
    r.unmeasured[a] = norm2(pa * psi2);
    for (Index b = 0; b < m; ++b) {
      const ComplexMatrix pb = projector(obs, bins[b]).cast<cplx>();
      r.joint(a, b) = norm2(pa * u2 * pb * psi1);
    }
  }
  return r;
}

/// q(x2,x0) from the four-point trace formula with ρ = Π_x0/V_x0 and durations dt1, dt2.
inline double q_term(const RealMatrix& h, const puredyn::CoarseObservable& obs, int x2, int x0, double dt1,
                     double dt2) {
  const ComplexMatrix u1 = evolution(h, dt1), u2 = evolution(h, dt2);
  const ComplexMatrix p2 = projector(obs, x2).cast<cplx>();
  const ComplexMatrix rho = projector(obs, x0).cast<cplx>() / static_cast<double>(obs.volume(x0));
  const ComplexMatrix rho1 = u1 * rho * u1.adjoint();
  cplx q = (p2 * u2 * rho1 * u2.adjoint()).trace();
  for (int x1 : obs.bins()) {
    const ComplexMatrix p1 = projector(obs, x1).cast<cplx>();
    q -= (p2 * u2 * p1 * rho1 * p1 * u2.adjoint()).trace();
  }
  return q.real();
}

/// R(x,y) = |Π_x U_τ Π_y ψ|² / |Π_y ψ|² in bins() order.
inline RealMatrix rates(const RealMatrix& h, const puredyn::CoarseObservable& obs, const ComplexVector& psi, double tau) {
  const auto& bins = obs.bins();
  const Index m = static_cast<Index>(bins.size());
  const ComplexMatrix u = evolution(h, tau);
  RealMatrix r(m, m);
  for (Index y = 0; y < m; ++y) {
    const ComplexVector py = projector(obs, bins[y]).cast<cplx>() * psi;
    for (Index x = 0; x < m; ++x) r(x, y) = norm2(projector(obs, bins[x]).cast<cplx>() * u * py) / norm2(py);
  }
  return r;
}

/// S = Σ_x p_x (ln V_x − ln p_x).
inline double entropy(const puredyn::CoarseObservable& obs, const ComplexVector& psi) {
  double s = 0.0;
  for (int x : obs.bins()) {
    const double p = norm2(projector(obs, x).cast<cplx>() * psi);
    if (p > 0) s += p * (std::log(static_cast<double>(obs.volume(x))) - std::log(p));
  }
  return s;
}

/// J(x,y) = 2 Im⟨Π_x ψ|H|Π_y ψ⟩.
inline RealMatrix currents(const RealMatrix& h, const puredyn::CoarseObservable& obs, const ComplexVector& psi) {
  const auto& bins = obs.bins();
  const Index m = static_cast<Index>(bins.size());
  RealMatrix j(m, m);
  for (Index x = 0; x < m; ++x)
    for (Index y = 0; y < m; ++y) {
      const ComplexVector px = projector(obs, bins[x]).cast<cplx>() * psi;
      const ComplexVector py = projector(obs, bins[y]).cast<cplx>() * psi;
      j(x, y) = 2.0 * px.dot(h.cast<cplx>() * py).imag();
    }
  return j;
}

}  // namespace oracle
