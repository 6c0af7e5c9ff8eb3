#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "puredyn/errors.hpp"
#include "puredyn/states.hpp"
#include "puredyn/time_reversal.hpp"

using namespace puredyn;

TEST_CASE("names round-trip") {
  CHECK(time_reversal_from_string("kz") == TimeReversalKind::ComplexConjugation);
  CHECK(time_reversal_from_string("rotated") == TimeReversalKind::SpinFlip);
  CHECK(std::string(to_string(TimeReversalKind::SpinFlip)) == "rotated");
  CHECK_THROWS_AS(time_reversal_from_string("parity"), DomainError);
}

TEST_CASE("spin-flip reversal equals the product of i sigma_y restricted to the sector") {
  const int l = 6;
  const SectorBasis b(l);
  const TimeReversal theta(TimeReversalKind::SpinFlip, b);
  RealMatrix full = RealMatrix::Identity(1, 1);
  for (int s = 0; s < l; ++s) full = Eigen::kroneckerProduct(full, oracle::pauli_y_over_i()).eval();
  const RealMatrix ref = oracle::restrict_to_sector(full, b);
  RealMatrix lib = RealMatrix::Zero(ref.rows(), ref.cols());
  for (Index i = 0; i < theta.dim(); ++i) lib(theta.target(i), i) = theta.sign(i);
  CHECK((lib - ref).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("reversal maps labels and leaves the XXZ chain invariant") {
  const SectorBasis b(8);
  const HermitianOperator h = build_xxz(b);
  const CoarseObservable obs = coarse_grain(build_density_wave(b, 1), 0.74);
  for (auto kind : {TimeReversalKind::ComplexConjugation, TimeReversalKind::SpinFlip}) {
    const TimeReversal theta(kind, b);
    CHECK((theta.transform(h).to_dense() - h.to_dense()).cwiseAbs().maxCoeff() == 0.0);
    for (Index i = 0; i < theta.dim(); ++i)
      CHECK(obs.label_of(theta.target(i)) == theta.map_label(obs.label_of(i)));
    const PureState psi = gaussian_random_state(h.dim(), 2);
    const PureState twice = theta.apply(theta.apply(psi));
    CHECK((twice.amplitudes - psi.amplitudes).norm() < 1e-14);  // Θ² = (−1)^L = 1
    const PureState once = theta.apply(psi);
    CHECK(once.amplitudes.norm() == doctest::Approx(1.0));
  }
  CHECK(TimeReversal(TimeReversalKind::SpinFlip, b).map_label(2) == -2);
  CHECK(TimeReversal(TimeReversalKind::ComplexConjugation, b).map_label(2) == 2);
}

TEST_CASE("conjugation reverses the direction of time") {
  const SectorBasis b(8);
  const Spectrum spec = diagonalize(build_xxz(b));
  const ExactPropagator prop(spec);
  const TimeReversal theta(TimeReversalKind::ComplexConjugation, b);
  const PureState psi = gaussian_random_state(spec.dim(), 4);
  // Θ U(t) ψ = U(−t) Θ ψ for a real H.
  const PureState lhs = theta.apply(prop.evolve(psi, 2.0));
  const PureState rhs = prop.evolve(theta.apply(psi), -2.0);
  CHECK((lhs.amplitudes - rhs.amplitudes).norm() < 1e-12);
}

TEST_CASE("symmetry identity residual vanishes for random triples") {
  const SectorBasis b(8);
  const HermitianOperator h = build_xxz(b);
  const Spectrum spec = diagonalize(h);
  const CoarseObservable obs = coarse_grain(build_density_wave(b, 2), 0.74);
  std::mt19937_64 gen(17);
  for (auto kind : {TimeReversalKind::ComplexConjugation, TimeReversalKind::SpinFlip}) {
    const TimeReversal theta(kind, b);
    const Spectrum rev = diagonalize(theta.transform(h));
    std::uniform_int_distribution<std::size_t> pick(0, obs.bins().size() - 1);
    std::uniform_real_distribution<double> tau(0.05, 5.0);
    for (int k = 0; k < 10; ++k) {
      const int x = obs.bins()[pick(gen)], y = obs.bins()[pick(gen)];
      CHECK(symmetry_identity_residual(spec, rev, obs, theta, x, y, tau(gen)) <= 1e-8 * spec.dim());
    }
  }
}
