#include <doctest.h>

#include <cmath>

#include "puredyn/errors.hpp"
#include "puredyn/eth_synthetic.hpp"

using namespace puredyn;

namespace {

ComplexMatrix dense(const BandedMatrix& b) {
  ComplexMatrix m(b.size(), b.size());
  for (Index i = 0; i < b.size(); ++i)
    for (Index j = 0; j < b.size(); ++j) m(i, j) = b.get(i, j);
  return m;
}

BandedMatrix random_banded(Index n, Index w, unsigned seed) {
  BandedMatrix b(n, w);
  std::srand(seed);
  for (Index i = 0; i < n; ++i)
    for (Index j = std::max<Index>(0, i - w); j <= std::min(n - 1, i + w); ++j)
      b.at(i, j) = cplx(std::rand() / double(RAND_MAX) - 0.5, std::rand() / double(RAND_MAX) - 0.5);
  return b;
}

}  // namespace

TEST_CASE("banded algebra matches dense matrices") {
  const BandedMatrix a = random_banded(30, 3, 1), b = random_banded(30, 2, 2);
  const ComplexMatrix da = dense(a), db = dense(b);
  CHECK((dense(a * b) - da * db).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(std::abs(a.trace_product(b) - (da * db).trace()) < 1e-12);
  CHECK(std::abs(a.trace() - da.trace()) < 1e-13);
  const ComplexVector l = ComplexVector::Random(30), r = ComplexVector::Random(30);
  CHECK((dense(a.scaled(l, r)) - l.asDiagonal() * da * r.asDiagonal()).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(a.get(0, 10) == cplx{});
}

TEST_CASE("synthetic bank structure") {
  const SynthModel m = build_synth(256, 4, 16, 3);
  CHECK(m.volumes == std::vector<Index>{64, 64, 64, 64});
  CHECK(m.delta_e == doctest::Approx(1.0 / 256));
  CHECK(m.energies[255] - m.energies[0] == doctest::Approx(255.0 / 256));
  std::size_t band = 0;
  for (Index k = 0; k < 256; ++k)
    for (Index l = 0; l < 256; ++l) band += std::abs(k - l) < 16;
  CHECK(m.band_entries == band);
  for (int x = 0; x < 4; ++x) {
    const ComplexMatrix p = dense(m.member(x));
    CHECK((p - p.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(p.imag().cwiseAbs().maxCoeff() == 0.0);
    CHECK(std::abs(p.trace().real() - 64.0) < 6.0 * m.envelope[x]);
  }
  CHECK(build_synth(10, 3, 2, 1).volumes == std::vector<Index>{4, 3, 3});
  CHECK_THROWS_AS(build_synth(10, 3, 11, 1), DomainError);
  const SynthModel flat = build_synth(64, 4, 4, 1, SynthOptions{0.0, 0.0});
  CHECK(flat.resolution_deviation() < 1e-15);
  CHECK(flat.calibration_error(0) == doctest::Approx(0.75));  // tr Π² = V²/D = V/4 without fluctuations
}

TEST_CASE("calibration makes tr P^2 close to V") {
  const SynthModel m = build_synth(4096, 4, 64, 5);
  for (int x = 0; x < 4; ++x) CHECK(m.calibration_error(x) <= 0.1);
}

TEST_CASE("q-term estimates match dense contractions") {
  const SynthModel m = build_synth(64, 4, 8, 9);
  const double t1 = 3.0, t2 = 5.0;
  const Index D = m.D;
  ComplexVector u1(D), u2(D);
  for (Index k = 0; k < D; ++k) {
    u1[k] = std::polar(1.0, -m.energies[k] * t1);
    u2[k] = std::polar(1.0, -m.energies[k] * t2);
  }
  std::vector<ComplexMatrix> p;
  for (const auto& r : m.random_parts) p.push_back(dense(r));
  const ComplexMatrix U1 = u1.asDiagonal(), U2 = u2.asDiagonal();
  const ComplexMatrix a = U1 * p[0] * U1.adjoint();
  const ComplexMatrix g = U2.adjoint() * p[1] * U2;
  const double f = 3.0 / 4.0, v0 = 16.0;
  cplx q1 = f * (g * a).trace() / v0, q2{}, q3{}, q4{};
  for (int x = 0; x < 4; ++x) {
    q2 += f * (g * p[x] * a).trace() / v0;
    q3 += f * (p[x] * g * a).trace() / v0;
    for (int y = 0; y < 4; ++y)
      if (x != y) q4 += (p[y] * g * p[x] * a).trace() / v0;
  }
  const QTerms q = estimate_q_terms(m, 1, 0, t1, t2);
  CHECK(std::abs(q.q1 - q1) < 1e-12);
  CHECK(std::abs(q.q2 - q2) < 1e-12);
  CHECK(std::abs(q.q3 - q3) < 1e-12);
  CHECK(std::abs(q.q4 - q4) < 1e-12);
  CHECK(std::abs(q.total() - (q1 + q2 + q3 + q4)) < 1e-12);
  CHECK_THROWS_AS(estimate_q_terms(m, 1, 1, t1, t2), DomainError);
}

TEST_CASE("random walk spread is close to sqrt(D)") {
  const RandomWalkStats r = random_walk_check(4096, 400, 1);
  CHECK(r.ratio >= 0.8);
  CHECK(r.ratio <= 1.25);
  CHECK_THROWS_AS(random_walk_check(10, 1, 1), DomainError);
}

TEST_CASE("level jitter shifts energies only when enabled") {
  const SynthModel a = build_synth(128, 2, 4, 1);
  const SynthModel b = build_synth(128, 2, 4, 1, SynthOptions{0.1, 1.0});
  CHECK((a.energies - b.energies).cwiseAbs().maxCoeff() > 0.0);
  CHECK((a.energies - b.energies).cwiseAbs().maxCoeff() < 1.0 / 128);
}
