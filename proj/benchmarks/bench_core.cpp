// Hot paths of a flow step: sigma recurrence, Hermitian eigenvalues, the
// spectral Hessian and one right-hand side evaluation.

#include <benchmark/benchmark.h>

#include <numbers>

#include "sigmaflow/flow.hpp"
#include "sigmaflow/random.hpp"
#include "sigmaflow/spectral.hpp"
#include "sigmaflow/symfun.hpp"

using namespace sigmaflow;

namespace {

Background stationary_background(const TorusGrid& g, int k, std::vector<double> b = {}) {
  FourierMode m;
  m.wave = {1, 0, 0, 1};
  m.amplitude = 0.1 / (std::numbers::pi * std::numbers::pi);
  const FourierMode modes[] = {m};
  return {HermitianMatrix::identity(2), HermitianMatrix::diagonal({2.0, 1.0}),
          PotentialField::from_modes(g, modes), k, std::move(b)};
}

void BM_sigma_all(benchmark::State& state) {
  Rng rng(1, 0, 0);
  RealTuple x(static_cast<int>(state.range(0)));
  for (int i = 0; i < x.size(); ++i) x[i] = rng.uniform(0.1, 10.0);
  for (auto _ : state) benchmark::DoNotOptimize(Sigmas(x.span()));
}
BENCHMARK(BM_sigma_all)->DenseRange(2, 4);

void BM_eigvals(benchmark::State& state) {
  Rng rng(2, 0, 0);
  const HermitianMatrix a = random_positive_hermitian(rng, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(eigvals(a));
}
BENCHMARK(BM_eigvals)->DenseRange(2, 4);

void BM_complex_hessian(benchmark::State& state) {
  const TorusGrid g(2, static_cast<int>(state.range(0)));
  const SpectralHessian h(g);
  const Background bg = stationary_background(g, 1);
  std::vector<std::vector<double>> comp;
  for (auto _ : state) {
    h.components(bg.psi0->values(), comp);
    benchmark::DoNotOptimize(comp.data());
  }
}
BENCHMARK(BM_complex_hessian)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_rhs(benchmark::State& state) {
  const TorusGrid g(2, 16);
  const bool augmented = state.range(0) != 0;
  const FlowSolver solver(stationary_background(g, 1, augmented ? std::vector<double>{1.0}
                                                                 : std::vector<double>{}),
                          g);
  const FlowState s = solver.initial_state();
  for (auto _ : state) benchmark::DoNotOptimize(solver.rhs(s));
}
BENCHMARK(BM_rhs)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
