#include <benchmark/benchmark.h>

#include "puredyn/basis.hpp"
#include "puredyn/diagnostics.hpp"
#include "puredyn/kernels.hpp"
#include "puredyn/operators.hpp"
#include "puredyn/spectral.hpp"

using namespace puredyn;

namespace {

struct Fixture {
  int sites;
  SectorBasis basis;
  HermitianOperator h;
  CoarseObservable obs;
  Spectrum spec;
  ComplexMatrix u;
  ComplexMatrix psi;
  RealMatrix a;
  std::vector<double> times;

  explicit Fixture(int l)
      : sites(l), basis(l), h(build_xxz(basis)), obs(coarse_grain(build_density_wave(basis, 1), 0.74)),
        spec(diagonalize(h)) {
    u = MacroPropagator(spec, obs, 0.5).matrix();
    psi = ComplexMatrix(spec.dim(), 64);
    for (Index c = 0; c < psi.cols(); ++c) psi.col(c) = kernels::haar_vector(spec.dim(), 7, c);
    a = to_eigenbasis(spec, obs.lambda());
    times = uniform_grid(0.0, 50.0, 199);
  }
};

Fixture& fixture(int l) {
  static Fixture f10(10), f12(12);
  return l == 10 ? f10 : f12;
}

template <bool Parallel>
void csr(benchmark::State& st) {
  const SectorBasis basis(static_cast<int>(st.range(0)));
  const HermitianOperator h = build_xxz(basis);
  const ComplexVector in = kernels::haar_vector(h.dim(), 3, 0);
  ComplexVector out(h.dim());
  for (auto _ : st) {
    if constexpr (Parallel) kernels::parallel::csr_apply(h.csr(), in.data(), out.data());
    else kernels::serial::csr_apply(h.csr(), in.data(), out.data());
    benchmark::DoNotOptimize(out.data());
  }
  st.SetItemsProcessed(st.iterations() * h.csr().nonzeros());
}

template <bool Parallel>
void weights(benchmark::State& st) {
  Fixture& f = fixture(static_cast<int>(st.range(0)));
  const ComplexMatrix sorted = sort_rows(f.psi, f.obs);
  std::vector<RealMatrix> w;
  RealMatrix full;
  for (auto _ : st) {
    if constexpr (Parallel) kernels::parallel::transition_weights(f.u, sorted, f.obs.offsets(), w, full);
    else kernels::serial::transition_weights(f.u, sorted, f.obs.offsets(), w, full);
    benchmark::DoNotOptimize(full.data());
  }
}

template <bool Parallel>
void phases(benchmark::State& st) {
  Fixture& f = fixture(static_cast<int>(st.range(0)));
  for (auto _ : st) {
    RealVector v = Parallel ? kernels::parallel::cosine_phase_sum(f.a, f.spec.energies, f.times)
                            : kernels::serial::cosine_phase_sum(f.a, f.spec.energies, f.times);
    benchmark::DoNotOptimize(v.data());
  }
}

template <bool Parallel>
void haar(benchmark::State& st) {
  Fixture& f = fixture(static_cast<int>(st.range(0)));
  const Index b0 = f.obs.offsets()[0], nb = f.obs.volume_at(0);
  const ComplexMatrix block = f.u.block(b0, b0, nb, nb);
  for (auto _ : st) {
    RealVector v = Parallel ? kernels::parallel::haar_quadratic_samples(block, 256, 11)
                            : kernels::serial::haar_quadratic_samples(block, 256, 11);
    benchmark::DoNotOptimize(v.data());
  }
}

}  // namespace

BENCHMARK(csr<false>)->Name("csr_apply/serial")->Arg(12)->Arg(14)->Arg(16);
BENCHMARK(csr<true>)->Name("csr_apply/parallel")->Arg(12)->Arg(14)->Arg(16);
BENCHMARK(weights<false>)->Name("transition_weights/serial")->Arg(10)->Arg(12);
BENCHMARK(weights<true>)->Name("transition_weights/parallel")->Arg(10)->Arg(12);
BENCHMARK(phases<false>)->Name("cosine_phase_sum/serial")->Arg(10)->Arg(12);
BENCHMARK(phases<true>)->Name("cosine_phase_sum/parallel")->Arg(10)->Arg(12);
BENCHMARK(haar<false>)->Name("haar_quadratic_samples/serial")->Arg(10)->Arg(12);
BENCHMARK(haar<true>)->Name("haar_quadratic_samples/parallel")->Arg(10)->Arg(12);

BENCHMARK_MAIN();
