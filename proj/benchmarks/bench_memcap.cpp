#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "memcap/holevo.hpp"
#include "memcap/linalg.hpp"
#include "memcap/optim.hpp"
#include "memcap/scales.hpp"
#include "memcap/simulate.hpp"

namespace {

using namespace memcap;

void BM_ChiMirror(benchmark::State& state) {
  double a = 0.6;
  for (auto _ : state) {
    benchmark::DoNotOptimize(chi_ad_mirror(0.3, a));
    a = a < 0.9 ? a + 1e-6 : 0.6;
  }
}
BENCHMARK(BM_ChiMirror);

void BM_MaximizeChiSum(benchmark::State& state) {
  std::vector<double> gammas;
  for (int i = 0; i < state.range(0); ++i) gammas.push_back(0.9 * i / state.range(0));
  const std::vector<double> w(gammas.size(), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(maximize_chi_sum(gammas, w).value);
}
BENCHMARK(BM_MaximizeChiSum)->Arg(2)->Arg(8);

void BM_HermEigen(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const Complex z = i == j ? Complex{g(rng), 0.0} : Complex{g(rng), g(rng)};
      m(i, j) = z;
      m(j, i) = std::conj(z);
    }
  }
  for (auto _ : state) benchmark::DoNotOptimize(herm_eigenvalues(m));
}
BENCHMARK(BM_HermEigen)->Arg(2)->Arg(4)->Arg(16);

void BM_ScaleR(benchmark::State& state) {
  const auto l = static_cast<std::size_t>(state.range(0));
  std::vector<double> gammas;
  for (std::size_t i = 0; i < l; ++i) gammas.push_back(0.9 * i / l);
  const auto set = BranchSet::amplitude_damping(gammas);
  for (auto _ : state) benchmark::DoNotOptimize(scale_r(set, l / 2).value);
}
BENCHMARK(BM_ScaleR)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_RunTrials(benchmark::State& state) {
  const double gammas[] = {0.0, 0.2, 0.4, 0.6};
  const ScaleOracle oracle(BranchSet::amplitude_damping(gammas), PeriodicMemory{});
  const Strategy s{{0, 1}, 0.5};
  for (auto _ : state) benchmark::DoNotOptimize(run_trials(oracle, s, 100000, 42).empirical_error);
}
BENCHMARK(BM_RunTrials)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
