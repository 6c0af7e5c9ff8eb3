#include "puredyn/spectral.hpp"

#include <lapacke.h>

#include <Eigen/Eigenvalues>
#include <algorithm>

#include <cmath>
#include <random>
#include <string>

#include "puredyn/errors.hpp"
#include "puredyn/kernels.hpp"

namespace puredyn {

double Spectrum::delta_E() const {
  const double mean = energies.mean();
  return std::sqrt((energies.array() - mean).square().mean());
}

double Spectrum::delta_e() const { return dim() > 1 ? width() / static_cast<double>(dim() - 1) : 0.0; }

namespace {

bool lapack_solve(RealMatrix& a, RealVector& w) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  return LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, a.data(), n, w.data()) == 0;
}

// Some BLAS builds pick kernels that return wrong GEMM results on the host CPU
// (the eigenvalues survive, the eigenvectors do not). Probe once.
bool lapack_trustworthy() {
  static const bool ok = [] {
    const Index n = 160;
    RealMatrix a(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j <= i; ++j) a(i, j) = a(j, i) = std::sin(0.37 * double(i * n + j) + 1.0);
    RealMatrix v = a;
    RealVector w(n);
    if (!lapack_solve(v, w)) return false;
    const double orth = (v.transpose() * v - RealMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
    const double resid = (a * v - v * w.asDiagonal()).cwiseAbs().maxCoeff();
    return orth < 1e-10 && resid < 1e-10 * std::max(1.0, w.cwiseAbs().maxCoeff());
  }();
  return ok;
}

}  // namespace

bool lapack_eigensolver_available() { return lapack_trustworthy(); }

Spectrum diagonalize(const RealMatrix& h, Index capacity) {
  if (h.rows() != h.cols()) throw DomainError("diagonalize needs a square matrix");
  if (h.rows() > capacity)
    throw CapacityError("dimension " + std::to_string(h.rows()) + " exceeds dense solver capacity " +
                        std::to_string(capacity) + "; use Krylov propagation instead");
  Spectrum s;
  if (h.rows() == 0) return s;
  if (lapack_trustworthy()) {
    s.vectors = h;
    s.energies.resize(h.rows());
    if (!lapack_solve(s.vectors, s.energies)) throw NumericalError("dsyevd failed");
    return s;
  }
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(h);
  if (es.info() != Eigen::Success) throw NumericalError("self-adjoint eigensolver did not converge");
  s.energies = es.eigenvalues();
  s.vectors = es.eigenvectors();
  return s;
}

Spectrum diagonalize(const HermitianOperator& h, Index capacity) {
  if (h.dim() > capacity)
    throw CapacityError("dimension " + std::to_string(h.dim()) + " exceeds dense solver capacity " +
                        std::to_string(capacity) + "; use Krylov propagation instead");
  return diagonalize(h.to_dense(), capacity);
}

RealMatrix to_eigenbasis(const Spectrum& spec, const RealVector& diag) {
  return spec.vectors.transpose() * (diag.asDiagonal() * spec.vectors);
}

RealMatrix to_eigenbasis(const Spectrum& spec, const HermitianOperator& op) {
  RealMatrix xv(op.dim(), spec.dim());
  RealVector col, out;
  for (Index j = 0; j < spec.dim(); ++j) {
    col = spec.vectors.col(j);
    op.apply(col, out);
    xv.col(j) = out;
  }
  return spec.vectors.transpose() * xv;
}

BandProfile band_profile(const RealMatrix& x_eig, const Spectrum& spec, int nbins, double threshold) {
  if (nbins < 4) throw DomainError("band profile needs at least 4 frequency bins");
  const Index d = spec.dim();
  const double w = spec.width();
  BandProfile p;
  p.omega_edges.resize(static_cast<std::size_t>(nbins) + 1);
  for (int b = 0; b <= nbins; ++b) p.omega_edges[b] = -w + 2.0 * w * b / nbins;
  std::vector<double> sum(static_cast<std::size_t>(nbins), 0.0);
  p.counts.assign(static_cast<std::size_t>(nbins), 0);
  double total = 0.0;
  for (Index l = 0; l < d; ++l)
    for (Index k = 0; k < d; ++k) {
      const double v = x_eig(k, l) * x_eig(k, l);
      total += v;
      if (k == l) continue;
      const double om = spec.energies[k] - spec.energies[l];
      int b = w > 0 ? static_cast<int>(std::floor((om + w) / (2.0 * w) * nbins)) : nbins / 2;
      b = std::clamp(b, 0, nbins - 1);
      sum[b] += v;
      ++p.counts[b];
    }
  // Entries at rounding level are treated as structural zeros.
  const double floor = 1e-24 * total / std::max<Index>(d, 1);
  p.mean_sq.resize(static_cast<std::size_t>(nbins));
  for (int b = 0; b < nbins; ++b) {
    const double m = p.counts[b] ? sum[b] / static_cast<double>(p.counts[b]) : 0.0;
    p.mean_sq[b] = m > floor ? m : 0.0;
    p.peak = std::max(p.peak, p.mean_sq[b]);
  }
  if (p.peak > 0.0)
    for (int b = 0; b < nbins; ++b)
      if (p.mean_sq[b] >= threshold * p.peak) {
        const double centre = 0.5 * (p.omega_edges[b] + p.omega_edges[b + 1]);
        p.bandwidth = std::max(p.bandwidth, std::abs(centre));
      }
  const double de = spec.delta_e();
  p.d_states = de > 0 ? static_cast<Index>(std::llround(p.bandwidth / de)) : 0;
  return p;
}

double norm_from_gram(const std::function<void(const RealVector&, RealVector&)>& gram, Index dim,
                      const PowerIterationOptions& opt) {
  std::mt19937_64 gen(opt.seed);
  std::normal_distribution<double> normal;
  RealVector v(dim), w(dim);
  for (Index i = 0; i < dim; ++i) v[i] = normal(gen);
  v.normalize();
  double estimate = 0.0;
  for (int it = 0; it < opt.max_iterations; ++it) {
    gram(v, w);
    const double rayleigh = v.dot(w);
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    v = w / nw;
    const double next = std::sqrt(std::max(rayleigh, 0.0));
    if (it > 0 && std::abs(next - estimate) <= opt.tolerance * std::max(next, 1e-300)) return next;
    estimate = next;
  }
  return estimate;
}

double operator_norm(const HermitianOperator& a, const PowerIterationOptions& opt) {
  RealVector tmp;
  return norm_from_gram(
      [&](const RealVector& in, RealVector& out) {
        a.apply(in, tmp);
        a.apply(tmp, out);
      },
      a.dim(), opt);
}

double commutator_norm(const HermitianOperator& h, const HermitianOperator& x, const PowerIterationOptions& opt) {
  if (h.dim() != x.dim()) throw DomainError("commutator operands have different dimensions");
  RealVector a, b, c;
  // C = HX − XH is antisymmetric, so CᵀC = −C².
  auto apply_c = [&](const RealVector& in, RealVector& out) {
    x.apply(in, a);
    h.apply(a, out);
    h.apply(in, b);
    x.apply(b, c);
    out -= c;
  };
  RealVector mid;
  return norm_from_gram(
      [&](const RealVector& in, RealVector& out) {
        apply_c(in, mid);
        apply_c(mid, out);
        out = -out;
      },
      h.dim(), opt);
}

double commutator_ratio(const HermitianOperator& h, const HermitianOperator& x, const PowerIterationOptions& opt) {
  const double nh = operator_norm(h, opt);
  const double nx = operator_norm(x, opt);
  if (nh == 0.0 || nx == 0.0) return 0.0;
  return commutator_norm(h, x, opt) / (nh * nx);
}

BandCommutatorReport check_band_commutator(const RealMatrix& x_eig, const Spectrum& spec, double threshold,
                                           int nbins) {
  BandCommutatorReport r;
  const double w = spec.width();
  if (!(w > 0.0)) return r;
  Spectrum scaled;
  scaled.energies = (spec.energies.array() - spec.energies[0]) / w;
  const BandProfile prof = [&] {
    Spectrum s;
    s.energies = scaled.energies;
    return band_profile(x_eig, s, nbins, threshold);
  }();
  r.band_width = prof.bandwidth;
  const Index d = spec.dim();
  RealMatrix c(d, d);
  double outside = 0.0;
  for (Index l = 0; l < d; ++l)
    for (Index k = 0; k < d; ++k) {
      const double om = scaled.energies[k] - scaled.energies[l];
      c(k, l) = om * x_eig(k, l);
      if (std::abs(om) > r.band_width) outside += c(k, l) * c(k, l);
    }
  const auto sym_norm = [](const RealMatrix& m) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  };
  // [H,X] is antisymmetric; its norm is sqrt of the top eigenvalue of −C².
  r.commutator_norm = std::sqrt(std::max(0.0, sym_norm(-(c * c))));
  r.observable_norm = sym_norm(x_eig);
  r.bound = r.band_width * r.observable_norm;
  r.slack = std::sqrt(outside);
  r.holds = r.commutator_norm <= r.bound + r.slack + 1e-12 * r.observable_norm;
  return r;
}

DiagnosticSeries autocorrelation(const RealMatrix& a_eig, const Spectrum& spec, std::span<const double> times) {
  const RealMatrix sq = a_eig.cwiseAbs2();
  const double norm = sq.sum();
  if (!(norm > 0.0)) throw DomainError("autocorrelation of a zero operator");
  const RealVector v = kernels::cosine_phase_sum(sq, spec.energies, times) / norm;
  DiagnosticSeries s;
  s.times.assign(times.begin(), times.end());
  s.values.assign(v.data(), v.data() + v.size());
  return s;
}

CorrelationPair correlation_functions(const CoarseObservable& obs, const Spectrum& spec, std::span<const double> times) {
  obs.require_bin(0);
  CorrelationPair c;
  c.observable = autocorrelation(to_eigenbasis(spec, obs.lambda()), spec, times);
  c.observable.name = "corr_observable";
  c.projector = autocorrelation(to_eigenbasis(spec, obs.indicator(0)), spec, times);
  c.projector.name = "corr_projector";
  return c;
}

}  // namespace puredyn
