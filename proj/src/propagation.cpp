#include "puredyn/propagation.hpp"

#include <cmath>
#include <string>

#include "puredyn/errors.hpp"

namespace puredyn {

void PureState::normalize() {
  const double n = amplitudes.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw NumericalError("cannot normalize a zero or non-finite state");
  amplitudes /= n;
  norm_tag = amplitudes.norm();
}

void check_state(const PureState& s, double tol) {
  if (!s.amplitudes.allFinite()) throw NumericalError("state '" + s.recipe + "' has non-finite amplitudes");
  const double n = s.amplitudes.norm();
  if (std::abs(n - 1.0) > tol)
    throw NumericalError("state '" + s.recipe + "' has norm " + std::to_string(n) + " outside tolerance");
}

std::vector<PureState> Propagator::evolve_batch(std::span<const PureState> states, double t) const {
  std::vector<PureState> out(states.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < states.size(); ++i) out[i] = evolve(states[i], t);
  return out;
}

PureState ExactPropagator::evolve(const PureState& psi, double t) const {
  if (!std::isfinite(t)) throw DomainError("evolution time must be finite");
  if (psi.dim() != spec_->dim()) throw DomainError("state dimension does not match spectrum");
  ComplexVector c = spec_->vectors.transpose().cast<cplx>() * psi.amplitudes;
  for (Index k = 0; k < c.size(); ++k) c[k] *= std::polar(1.0, -spec_->energies[k] * t);
  PureState out;
  out.amplitudes = spec_->vectors.cast<cplx>() * c;
  out.recipe = psi.recipe;
  out.norm_tag = out.amplitudes.norm();
  check_state(out);
  return out;
}

ComplexMatrix ExactPropagator::trajectory(const PureState& psi, std::span<const double> times) const {
  if (psi.dim() != spec_->dim()) throw DomainError("state dimension does not match spectrum");
  const Index d = spec_->dim();
  const Index nt = static_cast<Index>(times.size());
  const RealMatrix& v = spec_->vectors;
  const ComplexVector c0 = v.transpose().cast<cplx>() * psi.amplitudes;
  RealMatrix cr(d, nt), ci(d, nt);
#pragma omp parallel for schedule(static)
  for (Index j = 0; j < nt; ++j)
    for (Index k = 0; k < d; ++k) {
      const cplx c = c0[k] * std::polar(1.0, -spec_->energies[k] * times[static_cast<std::size_t>(j)]);
      cr(k, j) = c.real();
      ci(k, j) = c.imag();
    }
  ComplexMatrix out(d, nt);
  out.real() = v * cr;
  out.imag() = v * ci;
  if (!out.allFinite()) throw NumericalError("trajectory has non-finite amplitudes");
  return out;
}

ComplexMatrix ExactPropagator::evolution_operator(double t) const {
  const RealMatrix& v = spec_->vectors;
  const RealVector c = (spec_->energies * t).array().cos();
  const RealVector s = (spec_->energies * t).array().sin();
  ComplexMatrix u(v.rows(), v.rows());
  u.real() = v * c.asDiagonal() * v.transpose();
  u.imag() = -(v * s.asDiagonal() * v.transpose());
  return u;
}

KrylovPropagator::KrylovPropagator(const HermitianOperator& h, PropagatorConfig cfg) : h_(&h), cfg_(cfg) {
  if (cfg_.krylov_dim < 4) throw DomainError("Krylov dimension must be at least 4");
  if (!(cfg_.step_tol > 0.0)) throw DomainError("Krylov step tolerance must be positive");
  if (!(cfg_.max_substep > 0.0)) throw DomainError("Krylov max substep must be positive");
}

PureState KrylovPropagator::evolve(const PureState& psi, double t) const {
  if (!std::isfinite(t)) throw DomainError("evolution time must be finite");
  if (psi.dim() != h_->dim()) throw DomainError("state dimension does not match operator");
  stats_ = {};
  const Index n = h_->dim();
  const int m_max = static_cast<int>(std::min<Index>(cfg_.krylov_dim, n));
  ComplexVector v = psi.amplitudes;
  const double total = std::abs(t);
  const double sign = t < 0 ? -1.0 : 1.0;
  double done = 0.0;
  double step = std::min(total, cfg_.max_substep);
  ComplexMatrix basis(n, m_max + 1);
  ComplexVector w;
  std::vector<double> alpha, beta;

  while (done < total) {
    step = std::min({step, total - done, cfg_.max_substep});
    const double beta0 = v.norm();
    basis.col(0) = v / beta0;
    alpha.clear();
    beta.clear();
    int m = 0;
    bool breakdown = false;
    for (int j = 0; j < m_max; ++j) {
      h_->apply(ComplexVector(basis.col(j)), w);
      const double a = basis.col(j).dot(w).real();
      w -= a * basis.col(j);
      if (j > 0) w -= beta.back() * basis.col(j - 1);
      // Full reorthogonalization keeps the small basis numerically orthonormal.
      for (int r = 0; r <= j; ++r) w -= basis.col(r).dot(w) * basis.col(r);
      alpha.push_back(a);
      m = j + 1;
      const double b = w.norm();
      if (b <= 1e-13 * std::max(1.0, std::abs(a))) {
        breakdown = true;
        break;
      }
      beta.push_back(b);
      basis.col(j + 1) = w / b;
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> es;
    RealVector diag = Eigen::Map<RealVector>(alpha.data(), m);
    RealVector off(std::max(m - 1, 0));
    for (int j = 0; j + 1 < m; ++j) off[j] = beta[j];
    es.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
    const RealMatrix& q = es.eigenvectors();
    const RealVector& theta = es.eigenvalues();

    // Accept the step when the residual estimate meets its share of the tolerance.
    while (true) {
      ComplexVector y(m);
      for (int r = 0; r < m; ++r) {
        cplx acc = 0.0;
        for (int k = 0; k < m; ++k) acc += q(r, k) * std::polar(1.0, -sign * theta[k] * step) * q(0, k);
        y[r] = acc;
      }
      const double err = breakdown ? 0.0 : beta0 * beta.back() * std::abs(y[m - 1]);
      const double allowed = cfg_.step_tol * step / std::max(total, 1e-300);
      if (err <= allowed || step <= 1e-12 * total) {
        v = beta0 * (basis.leftCols(m) * y);
        done += step;
        ++stats_.steps;
        if (breakdown) ++stats_.breakdowns;
        if (err < 0.1 * allowed) step *= 1.5;
        break;
      }
      ++stats_.rejected;
      step *= 0.5;
    }
    if (!v.allFinite()) throw NumericalError("Krylov propagation produced non-finite amplitudes");
  }
  PureState out;
  out.amplitudes = v;
  out.recipe = psi.recipe;
  out.norm_tag = v.norm();
  check_state(out);
  return out;
}

}  // namespace puredyn
