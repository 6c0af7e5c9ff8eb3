#include <doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "puredyn/diagnostics.hpp"
#include "puredyn/errors.hpp"
#include "puredyn/states.hpp"

using namespace puredyn;

namespace {

struct Chain {
  SectorBasis basis;
  HermitianOperator h;
  RealMatrix dense;
  Spectrum spec;
  CoarseObservable obs;
  Chain(int l, int q) : basis(l), h(build_xxz(basis)), dense(h.to_dense()), spec(diagonalize(h)),
                        obs(coarse_grain(build_density_wave(basis, q), 0.74)) {}
};

const Chain& chain8() {
  static const Chain c(8, 1);
  return c;
}

PureState tilted(const Chain& c, std::uint64_t seed) {
  return tilted_state(gaussian_random_state(c.spec.dim(), seed), c.obs.lambda(), 0.5);
}

}  // namespace

TEST_CASE("two-time probabilities and Q match the literal formulas") {
  const Chain& c = chain8();
  const PureState psi = tilted(c, 1);
  const ProbTable t = two_time_probs(psi, 0.8, 2.3, c.spec, c.obs);
  const auto ref = oracle::two_time(c.dense, c.obs, psi.amplitudes, 0.8, 2.3);
  CHECK((t.first - ref.first).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((t.joint - ref.joint).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((t.unmeasured - ref.unmeasured).cwiseAbs().maxCoeff() < 1e-10);
  const RealVector q = quantum_terms(t);
  CHECK((q - (ref.unmeasured - ref.joint.rowwise().sum())).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(std::abs(q.sum()) < 1e-10);
  CHECK(quantum_term_Q(psi, 0.8, 2.3, 1, c.spec, c.obs) == doctest::Approx(q[*c.obs.bin_index(1)]));
  CHECK_THROWS_AS(two_time_probs(psi, 2.0, 1.0, c.spec, c.obs), DomainError);
}

TEST_CASE("q four-point terms: oracle, sum rule and Zeno limits") {
  const Chain& c = chain8();
  const RealVector q = q_four_point_all(c.spec, c.obs, 0, 0.7, 1.9);
  for (Index b = 0; b < q.size(); ++b)
    CHECK(std::abs(q[b] - oracle::q_term(c.dense, c.obs, c.obs.bins()[b], 0, 0.7, 1.9)) < 1e-10);
  CHECK(std::abs(q.sum()) < 1e-10);
  CHECK(q_four_point_all(c.spec, c.obs, 0, 0.0, 1.9).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(q_four_point_all(c.spec, c.obs, 0, 0.7, 0.0).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("rates, LDB residual, entropy and currents match the literal formulas") {
  const Chain& c = chain8();
  const PureState psi = tilted(c, 2);
  const double tau = 0.4;
  const MacroPropagator mp(c.spec, c.obs, tau);
  ComplexMatrix col = psi.amplitudes;
  const auto step = mp.step(sort_rows(col, c.obs));
  const RealVector vol = exact_volumes(c.obs);
  const RateTable r = rate_table(step.weights[0], step.before.col(0), vol);
  const RealMatrix ref = oracle::rates(c.dense, c.obs, psi.amplitudes, tau);
  CHECK((r.rates - ref).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((r.rates.colwise().sum().array() - 1.0).abs().maxCoeff() < 1e-10);

  const SectorBasis& b = c.basis;
  const TimeReversal kz(TimeReversalKind::ComplexConjugation, b);
  const TimeReversal rot(TimeReversalKind::SpinFlip, b);
  const Index y0 = *c.obs.bin_index(0), x1 = *c.obs.bin_index(1), xm1 = *c.obs.bin_index(-1);
  const double v0 = vol[y0], v1 = vol[x1];
  CHECK(std::abs(ldb_residual(r, c.obs, kz, 0, 1) - std::abs(v0 * ref(x1, y0) / (v1 * ref(y0, x1)) - 1.0)) < 1e-8);
  CHECK(std::abs(ldb_residual(r, c.obs, rot, 0, 1) - std::abs(v0 * ref(x1, y0) / (v1 * ref(y0, xm1)) - 1.0)) < 1e-8);

  const std::vector<double> times{0.0};
  const auto s = entropy_series(step.before, times, vol);
  CHECK(std::abs(s.values[0] - oracle::entropy(c.obs, psi.amplitudes)) < 1e-12);
  CHECK((currents(psi.amplitudes, c.h, c.obs) - oracle::currents(c.dense, c.obs, psi.amplitudes)).cwiseAbs().maxCoeff() <
        1e-12);
}

TEST_CASE("currents are antisymmetric and generate the bin probabilities") {
  const Chain& c = chain8();
  const PureState psi = tilted(c, 3);
  const RealMatrix j = currents(psi.amplitudes, c.h, c.obs);
  CHECK((j + j.transpose()).cwiseAbs().maxCoeff() == 0.0);
  const ExactPropagator prop(c.spec);
  const double dt = 1e-5;
  const RealVector pp = bin_probabilities(prop.evolve(psi, dt).amplitudes, c.obs);
  const RealVector pm = bin_probabilities(prop.evolve(psi, -dt).amplitudes, c.obs);
  CHECK(((pp - pm) / (2 * dt) - j.rowwise().sum()).cwiseAbs().maxCoeff() < 1e-7);
  const auto adj = block_adjacency(c.h, c.obs);
  for (Index x = 0; x < j.rows(); ++x)
    for (Index y = 0; y < j.cols(); ++y)
      if (!adj(x, y)) CHECK(j(x, y) == 0.0);
}

TEST_CASE("Q_tau is the literal unmeasured minus measured sum") {
  const Chain& c = chain8();
  const PureState psi = tilted(c, 4);
  const std::vector<double> times{0.0, 1.5};
  const ExactPropagator prop(c.spec);
  const MacroPropagator mp(c.spec, c.obs, 0.3);
  const auto step = mp.step(sort_rows(prop.trajectory(psi, times), c.obs));
  const auto s = quantum_tau_series(step, times, 0.3);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto ref = oracle::two_time(c.dense, c.obs, psi.amplitudes, times[i], times[i] + 0.3);
    CHECK(std::abs(s.values[i] - (ref.unmeasured - ref.joint.rowwise().sum()).cwiseAbs().sum()) < 1e-10);
  }
  CHECK_THROWS_AS(quantum_tau_series(step, times, 0.0), DomainError);
}

TEST_CASE("Haar-average kernel is a stochastic matrix fixing the volume distribution") {
  const Chain c(10, 1);
  const MacroPropagator mp(c.spec, c.obs, 0.9);
  const RealMatrix k = mp.haar_kernel();
  CHECK((k.colwise().sum().array() - 1.0).abs().maxCoeff() < 1e-10);
  const RealVector pi = exact_volumes(c.obs) / static_cast<double>(c.obs.dim());
  CHECK((k * pi - pi).cwiseAbs().maxCoeff() < 1e-10);
  const RealMatrix t = mp.transfer_traces();
  CHECK((t - t.transpose()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("rates are undefined below the probability floor") {
  const Chain& c = chain8();
  const PureState psi = two_subspace_state(c.obs, 1.0, 5, 6);
  const MacroPropagator mp(c.spec, c.obs, 0.4);
  ComplexMatrix col = psi.amplitudes;
  const auto step = mp.step(sort_rows(col, c.obs));
  const RateTable r = rate_table(step.weights[0], step.before.col(0), exact_volumes(c.obs));
  const Index b1 = *c.obs.bin_index(1);
  CHECK_FALSE(r.defined[b1]);
  CHECK(std::isnan(r.rates(0, b1)));
  const TimeReversal kz(TimeReversalKind::ComplexConjugation, c.basis);
  CHECK(std::isnan(ldb_residual(r, c.obs, kz, 1, 0)));
}

TEST_CASE("time averages agree with a fine rectangle rule") {
  DiagnosticSeries s;
  s.times = uniform_grid(0.0, 10.0, 2000);
  for (double t : s.times) s.values.push_back(std::sin(t) + 0.1 * t);
  const double a = 2.3, b = 7.9;
  const int n = 200000;
  double rect = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = a + (i + 0.5) * (b - a) / n;
    rect += std::sin(t) + 0.1 * t;
  }
  rect /= n;
  CHECK(time_average(s, a, b) == doctest::Approx(rect).epsilon(1e-5));
  DiagnosticSeries lin;
  lin.times = {0.0, 1.0, 2.0};
  lin.values = {0.0, 2.0, 4.0};
  CHECK(time_average(lin, 0.5, 1.5) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS_AS(time_average(lin, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(time_average(lin, 0.0, 3.0), DomainError);
}

TEST_CASE("thermalization-time rules on an exponential decay") {
  DiagnosticSeries s;
  s.times = uniform_grid(0.0, 20.0, 4000);
  for (double t : s.times) s.values.push_back(std::exp(-t / 2.0));
  CHECK(thermalization_time({s}, 0.01) == doctest::Approx(2.0 * std::log(100.0)).epsilon(1e-4));
  CHECK(efold_thermalization_time(s, 0.01) == doctest::Approx(2.0 * std::log(100.0)).epsilon(1e-4));
  DiagnosticSeries flat = s;
  for (double& v : flat.values) v = 0.5;
  CHECK_THROWS_AS(thermalization_time({flat}), HorizonError);
  CHECK_THROWS_AS(efold_thermalization_time(flat), HorizonError);
  const auto r = rescaled(s, 0.0);
  CHECK(r.values.front() == 1.0);
}

TEST_CASE("ensemble expectation at t=0 and its long-time value") {
  const Chain& c = chain8();
  RealVector w = (-0.5 * c.obs.lambda().array()).exp();
  w /= w.sum();
  const RealMatrix rho = to_eigenbasis(c.spec, w);
  const std::vector<double> t0{0.0};
  CHECK(ensemble_expectation(c.spec, c.obs.lambda(), rho, t0).values[0] == doctest::Approx(w.dot(c.obs.lambda())));
  // Long-time mean of the oscillating curve approaches the diagonal value.
  const auto grid = uniform_grid(0.0, 4000.0, 40000);
  const auto e = ensemble_expectation(c.spec, c.obs.lambda(), rho, grid);
  CHECK(time_average(e, 1000.0, 4000.0) ==
        doctest::Approx(diagonal_ensemble_value(c.spec, c.obs.lambda(), rho)).epsilon(2e-2));
}

TEST_CASE("effective volumes and rescaled entropy") {
  const Chain& c = chain8();
  const PureState psi = tilted(c, 7);
  const ExactPropagator prop(c.spec);
  const auto times = uniform_grid(0.0, 30.0, 300);
  const RealMatrix p = bin_probabilities(prop.trajectory(psi, times), c.obs);
  const RealVector v = effective_volumes(p, times, 10.0, 30.0, 70.0);
  CHECK(v.sum() == doctest::Approx(70.0).epsilon(1e-12));
  const auto s = entropy_series(p, times, exact_volumes(c.obs));
  const auto r = rescaled_entropy(s, 70.0);
  CHECK(r.values.front() == 0.0);
  CHECK(r.values[100] == doctest::Approx((s.values[100] - s.values[0]) / (std::log(70.0) - s.values[0])));
  for (double x : s.values) CHECK(x <= std::log(70.0) + 1e-12);
}
