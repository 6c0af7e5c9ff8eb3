#include <doctest.h>

#include "puredyn/diagnostics.hpp"
#include "puredyn/errors.hpp"
#include "puredyn/states.hpp"

using namespace puredyn;

TEST_CASE("Gaussian random states are normalized and reproducible") {
  const PureState a = gaussian_random_state(500, 42);
  CHECK(a.amplitudes.norm() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(a.amplitudes == gaussian_random_state(500, 42).amplitudes);
  CHECK((a.amplitudes - gaussian_random_state(500, 43).amplitudes).norm() > 0.5);
  CHECK_FALSE(a.recipe.empty());
}

TEST_CASE("tilted state follows the exponential weight") {
  const PureState base = gaussian_random_state(6, 1);
  const RealVector lambda = (RealVector(6) << -2, -1, 0, 0, 1, 2).finished();
  const PureState t = tilted_state(base, lambda, 0.4);
  ComplexVector ref = base.amplitudes.array() * (-0.2 * lambda.array()).exp().cast<cplx>();
  ref.normalize();
  CHECK((t.amplitudes - ref).norm() < 1e-14);
  CHECK(tilted_state(base, lambda, 0.0).amplitudes.isApprox(base.amplitudes, 1e-14));
}

TEST_CASE("two-subspace states carry the requested weights exactly") {
  const SectorBasis b(10);
  const CoarseObservable obs = coarse_grain(build_density_wave(b, 1), 0.74);
  for (double dp : {-0.5, 0.0, 0.2, 1.0}) {
    const PureState s = two_subspace_state(obs, dp, 3, 4);
    const RealVector p = bin_probabilities(s.amplitudes, obs);
    CHECK(p[*obs.bin_index(0)] == doctest::Approx(0.5 * (1 + dp)).epsilon(1e-13));
    CHECK(p[*obs.bin_index(1)] == doctest::Approx(0.5 * (1 - dp)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(two_subspace_state(obs, 1.5, 3, 4), DomainError);
  const CoarseObservable half = coarse_grain(build_density_wave(b, 5), 0.74);
  CHECK_THROWS_AS(two_subspace_state(half, 0.2, 3, 4), EmptySubspaceError);
}

TEST_CASE("canonical energy") {
  Spectrum s;
  s.energies = (RealVector(3) << -1.0, 0.0, 2.0).finished();
  CHECK(canonical_energy(s, 0.0) == doctest::Approx(1.0 / 3.0));
  const double b = 0.7;
  const double z = std::exp(b) + 1.0 + std::exp(-2 * b);
  CHECK(canonical_energy(s, b) == doctest::Approx((-std::exp(b) + 2 * std::exp(-2 * b)) / z));
  CHECK(canonical_energy(s, 800.0) == doctest::Approx(-1.0));
  CHECK(default_window_width(20) == doctest::Approx(3.0));
}

TEST_CASE("microcanonical window state lives inside the window") {
  const SectorBasis b(10);
  const Spectrum spec = diagonalize(build_xxz(b));
  const CoarseObservable obs = coarse_grain(build_density_wave(b, 1), 0.74);
  const PureState s = microcanonical_window_state(spec, 0.0, 1.0, obs.lambda(), 0.1, 5);
  const auto window = energy_window(spec, 0.0, 1.0);
  const ComplexVector c = spec.vectors.transpose().cast<cplx>() * s.amplitudes;
  double inside = 0.0;
  for (Index k : window) inside += std::norm(c[k]);
  CHECK(inside == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(window.size() < static_cast<std::size_t>(spec.dim()));
  CHECK_THROWS_AS(microcanonical_window_state(spec, 0.0, 1e-9, obs.lambda(), 0.1, 5), EmptySubspaceError);
}

TEST_CASE("canonical product state factorizes") {
  const Spectrum a = diagonalize(build_tilted_ising(3, 1.0, 0.5, 1.0));
  const PureState s = canonical_product_state(a, a, 0.1, -0.1, 1, 2);
  CHECK(s.amplitudes.norm() == doctest::Approx(1.0));
  Eigen::Map<const ComplexMatrix> m(s.amplitudes.data(), 8, 8);  // column k holds chain-A amplitudes times b_k
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  CHECK(svd.singularValues()[1] < 1e-12);
}
