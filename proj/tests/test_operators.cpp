#include <doctest.h>

#include <bit>
#include <cmath>
#include <numbers>

#include "oracle.hpp"
#include "puredyn/errors.hpp"
#include "puredyn/operators.hpp"
#include "puredyn/spectral.hpp"

using namespace puredyn;

namespace {

RealMatrix density_wave_oracle(int sites, int q, const SectorBasis& b) {
  RealMatrix full = RealMatrix::Zero(Index(1) << sites, Index(1) << sites);
  for (int l = 0; l < sites; ++l)
    full += std::cos(2.0 * std::numbers::pi * (l + 1) * q / sites) * oracle::sz_site(l, sites);
  return oracle::restrict_to_sector(full, b);
}

RealMatrix ising_chain_oracle(int n, double hx, double hz, double gz) {
  const Index d = Index(1) << n;
  RealMatrix h = RealMatrix::Zero(d, d);
  for (int l = 0; l < n; ++l) {
    const RealMatrix zl = -oracle::site_op(oracle::pauli_z(), l, n);
    const RealMatrix zr = -oracle::site_op(oracle::pauli_z(), (l + 1) % n, n);
    h += hx * oracle::site_op(oracle::pauli_x(), l, n) + hz * zl + gz * zl * zr;
  }
  return h;
}

}  // namespace

TEST_CASE("XXZ sector matrix equals the Pauli tensor-product construction") {
  for (int l : {4, 6, 8}) {
    const SectorBasis b(l);
    const RealMatrix lib = build_xxz(b).to_dense();
    const RealMatrix ref = oracle::restrict_to_sector(oracle::xxz_full(l), b);
    CHECK((lib - ref).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("XXZ Hamiltonian is real symmetric and conserves magnetization") {
  const SectorBasis b(10);
  const HermitianOperator h = build_xxz(b);
  CHECK(h.max_asymmetry() == 0.0);
  CHECK(h.hermitian());
  CHECK(h.convention() == SpinConvention::HalfSpin);
  // The full-space operator has no elements leaving the sector.
  const RealMatrix full = oracle::xxz_full(8);
  const SectorBasis b8(8);
  double leak = 0.0;
  for (auto w : b8.configs())
    for (Index r = 0; r < full.rows(); ++r)
      if (std::popcount(static_cast<std::uint64_t>(r)) != 4) leak += std::abs(full(r, static_cast<Index>(w)));
  CHECK(leak == 0.0);
}

TEST_CASE("L=4 Neel state energy") {
  const SectorBasis b(4);
  const HermitianOperator h = build_xxz(b);
  // |↑↓↑↓⟩: nearest neighbours antiparallel (4 × 3/2 × −1/4), next-nearest parallel counted twice per pair
  // (4 × 1/2 × 1/4).
  const Index neel = static_cast<Index>(b.index_of(0b0101));
  CHECK(h.to_dense()(neel, neel) == doctest::Approx(-1.5 + 0.5).epsilon(1e-14));
  CHECK_THROWS_AS(build_xxz(SectorBasis(2)), DomainError);
}

TEST_CASE("density wave matches the tensor-product oracle and is normalized") {
  for (int q : {1, 2, 4}) {
    const SectorBasis b(8);
    const ObservableSpectrum x = build_density_wave(b, q);
    const RealMatrix ref = density_wave_oracle(8, q, b);
    CHECK((ref.diagonal() / x.norm_const - x.lambda).cwiseAbs().maxCoeff() < 1e-13);
    const double mean = x.lambda.mean();
    CHECK(std::abs(mean) < 1e-12);
    CHECK(std::abs((x.lambda.array() - mean).square().mean() - 1.0) < 1e-12);
  }
  CHECK_THROWS_AS(build_density_wave(SectorBasis(8), 0), DomainError);
  CHECK_THROWS_AS(build_density_wave(SectorBasis(8), 5), DomainError);
}

TEST_CASE("macrostate labels are symmetric and tile the spectrum") {
  CHECK(macrostate_label(0.0, 0.74) == 0);
  CHECK(macrostate_label(0.37, 0.74) == 0);
  CHECK(macrostate_label(-0.37, 0.74) == 0);
  CHECK(macrostate_label(0.3701, 0.74) == 1);
  CHECK(macrostate_label(-0.3701, 0.74) == -1);
  CHECK(macrostate_label(1.10, 0.74) == 1);
  CHECK(macrostate_label(1.12, 0.74) == 2);
  for (int l : {8, 10, 12}) {
    for (int q = 1; q <= l / 2; ++q) {
      const SectorBasis b(l);
      const CoarseObservable obs = coarse_grain(build_density_wave(b, q), 0.74);
      Index total = 0;
      RealVector ones = RealVector::Zero(obs.dim());
      for (int x : obs.bins()) {
        total += obs.volume(x);
        ones += obs.indicator(x);
        CHECK(obs.volume(x) == obs.volume(-x));
        CHECK(obs.volume(x) > 0);
      }
      CHECK(total == obs.dim());
      CHECK((ones.array() == 1.0).all());
    }
  }
}

TEST_CASE("q = L/2 with L = 4k+2 has no x = 0 macrostate") {
  const CoarseObservable obs = coarse_grain(build_density_wave(SectorBasis(10), 5), 0.74);
  CHECK_FALSE(obs.has(0));
  CHECK_THROWS_AS(obs.require_bin(0), EmptySubspaceError);
  const CoarseObservable obs12 = coarse_grain(build_density_wave(SectorBasis(12), 6), 0.74);
  CHECK(obs12.has(0));
}

TEST_CASE("bin ordering is consistent") {
  const CoarseObservable obs = coarse_grain(build_density_wave(SectorBasis(10), 1), 0.74);
  const auto& order = obs.order();
  const auto& off = obs.offsets();
  for (Index b = 0; b < obs.macrostate_count(); ++b)
    for (Index p = off[b]; p < off[b + 1]; ++p) {
      CHECK(obs.bin_of_state()[order[p]] == b);
      CHECK(obs.label_of(order[p]) == obs.bins()[b]);
    }
}

TEST_CASE("CSR assembly sums duplicates and drops zeros") {
  const CsrMatrix m = csr_from_entries(3, {{2, 1, 1.0}, {0, 0, 2.0}, {2, 1, 0.5}, {1, 1, 1.0}, {1, 1, -1.0}});
  CHECK(m.nonzeros() == 2);
  CHECK(m.row_ptr == std::vector<Index>{0, 1, 1, 2});
  CHECK(m.val[1] == 1.5);
}

TEST_CASE("operators apply consistently in sparse and dense storage") {
  const HermitianOperator h = build_xxz(SectorBasis(8));
  const HermitianOperator hd = HermitianOperator::from_dense(h.to_dense(), "dense");
  ComplexVector v = ComplexVector::Random(h.dim());
  CHECK(((h * v) - (hd * v)).norm() < 1e-12);
  CHECK(h.trace() == doctest::Approx(hd.trace()));
  const HermitianOperator shifted = h.affine(2.0, -1.0);
  CHECK(((shifted * v) - (2.0 * (h * v) - v)).norm() < 1e-12);
  CHECK(h.expectation(v / v.norm()) == doctest::Approx((v.dot(h * v)).real() / v.squaredNorm()));
  RealMatrix asym = RealMatrix::Identity(3, 3);
  asym(0, 1) = 1.0;
  CHECK_FALSE(HermitianOperator::from_dense(asym, "x").hermitian());
}

TEST_CASE("tilted Ising chain and coupled chains match Kronecker oracles") {
  const RealMatrix chain = build_tilted_ising(4, 1.0, 0.5, 1.0).to_dense();
  CHECK((chain - ising_chain_oracle(4, 1.0, 0.5, 1.0)).cwiseAbs().maxCoeff() < 1e-13);
  const IsingParams p{3, 1.0, 0.5, 1.0, 0.5};
  const RealMatrix ha = ising_chain_oracle(3, 1.0, 0.5, 1.0);
  const RealMatrix id = RealMatrix::Identity(8, 8);
  const RealMatrix zn = -oracle::site_op(oracle::pauli_z(), 2, 3);
  const RealMatrix ref = Eigen::kroneckerProduct(ha, id).eval() + Eigen::kroneckerProduct(id, ha).eval() +
                         0.5 * Eigen::kroneckerProduct(zn, zn).eval();
  CHECK((build_coupled_ising(p).to_dense() - ref).cwiseAbs().maxCoeff() < 1e-13);
  CHECK_THROWS_AS(build_coupled_ising(IsingParams{8, 1, 0.5, 1, 0.5}), CapacityError);
}

TEST_CASE("energy difference observable has unit second central moment") {
  const Spectrum a = diagonalize(build_tilted_ising(4, 1.0, 0.5, 1.0));
  const ObservableSpectrum x = build_energy_difference(a.energies, a.energies);
  const double mean = x.lambda.mean();
  CHECK(std::abs((x.lambda.array() - mean).square().mean() - 1.0) < 1e-10);
  CHECK(std::abs(mean) < 1e-12);
  CHECK(x.lambda[3 * 16 + 5] == doctest::Approx((a.energies[3] - a.energies[5]) / x.norm_const));
}

TEST_CASE("magnetization example") {
  const auto ex = build_magnetization_example(6);
  RealMatrix ref = RealMatrix::Zero(64, 64);
  for (int l = 0; l < 6; ++l)
    ref += -oracle::site_op(oracle::pauli_z(), l, 6) +
           oracle::site_op(oracle::pauli_x(), l, 6) * oracle::site_op(oracle::pauli_x(), (l + 1) % 6, 6);
  CHECK((ex.hamiltonian.to_dense() - ref).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(ex.magnetization.dim() == 64);
}
