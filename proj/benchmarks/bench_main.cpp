#include <benchmark/benchmark.h>

#include <cmath>

#include "fracdisp/dispersive.hpp"
#include "fracdisp/free_resolvent.hpp"
#include "fracdisp/hamiltonian.hpp"
#include "fracdisp/oscillatory.hpp"
#include "fracdisp/perturbed.hpp"

using namespace fracdisp;

namespace {

void BM_FreeResolventLadder(benchmark::State& state) {
  const FracParams p(0.75, 2);
  const SpectralPoint pt{1.0, 0.0, Sign::Plus};
  const double r = static_cast<double>(state.range(0)) / 4.0;
  for (auto _ : state) benchmark::DoNotOptimize(free_resolvent_value(pt, p, r));
}
BENCHMARK(BM_FreeResolventLadder)->Arg(1)->Arg(8)->Arg(64);

void BM_FreeResolventSplit(benchmark::State& state) {
  const FracParams p(0.75, 2);
  const SpectralPoint pt{1.0, 0.0, Sign::Plus};
  const double r = static_cast<double>(state.range(0)) / 4.0;
  for (auto _ : state)
    benchmark::DoNotOptimize(free_resolvent_value(pt, p, r, ResolventMethod::LaplacianSplit));
}
BENCHMARK(BM_FreeResolventSplit)->Arg(1)->Arg(8)->Arg(64);

void BM_OscillatoryIntegral(benchmark::State& state) {
  const double t = static_cast<double>(state.range(0));
  const PhaseSpec phase{t, 3.0, 1.25};
  auto amp = [](double l) { return cplx(std::exp(-l * l), 0.0); };
  for (auto _ : state) benchmark::DoNotOptimize(oscillatory_integral(phase, amp, 0.0, 4.0));
}
BENCHMARK(BM_OscillatoryIntegral)->Arg(10)->Arg(100)->Arg(1000);

void BM_FreeKernelMatrix(benchmark::State& state) {
  const FracParams p(0.75, 2);
  const SpatialGrid g = make_grid(2, 3.0, static_cast<int>(state.range(0)), GridMode::FullTensor);
  for (auto _ : state) {
    const FreeKernel k(p, g, {2.0, 0.0, Sign::Plus});
    benchmark::DoNotOptimize(k.full());
  }
}
BENCHMARK(BM_FreeKernelMatrix)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_Diagonalize(benchmark::State& state) {
  const FracParams p(0.75, 2);
  const SpatialGrid g = make_grid(2, 6.0, static_cast<int>(state.range(0)), GridMode::FullTensor);
  const Potential pot = sample_potential(PotentialKind::Bump, -0.5, 1.0, 10.0, g);
  const DiscreteHamiltonian h = discretize_hamiltonian(p, pot, g);
  for (auto _ : state) benchmark::DoNotOptimize(diagonalize(h));
}
BENCHMARK(BM_Diagonalize)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_FreeStoneKernel(benchmark::State& state) {
  const FracParams p(1.25, 3);
  const double t = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(free_stone_kernel(t, std::pow(t, 0.4), p, {}));
}
BENCHMARK(BM_FreeStoneKernel)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
