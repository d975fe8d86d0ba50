// Serial reference vs OpenMP kernels. Set DM_LIMITS_THREADS to vary the
// thread count of the parallel variants.
#include <benchmark/benchmark.h>

#include <random>

#include "dmlimits/finite_chain.hpp"
#include "dmlimits/gaussian_ar.hpp"
#include "dmlimits/mala.hpp"

namespace {

using dmlimits::Exec;

Exec exec_of(const benchmark::State& state) { return state.range(0) ? Exec::parallel : Exec::serial; }

void BM_BaxendaleGrid(benchmark::State& state) {
  const dmlimits::GaussianArConfig cfg(10, 100.0);
  for (auto _ : state) benchmark::DoNotOptimize(dmlimits::optimize_baxendale(cfg, exec_of(state)));
}
BENCHMARK(BM_BaxendaleGrid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_RhoStar(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(dmlimits::rho_star_lower(50, exec_of(state)));
}
BENCHMARK(BM_RhoStar)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

dmlimits::FiniteChain random_chain(int n) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd P(n, n);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) P(x, y) = u(rng) < 0.4 ? u(rng) : 0.0;
    P(x, x) += 0.1;
    P.row(x) /= P.row(x).sum();
  }
  return dmlimits::FiniteChain(P);
}

void BM_SubsetFloor(benchmark::State& state) {
  const auto chain = random_chain(14);
  for (auto _ : state) benchmark::DoNotOptimize(dmlimits::chain_floor_A(chain, exec_of(state)));
}
BENCHMARK(BM_SubsetFloor)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_MalaTable(benchmark::State& state) {
  const std::vector<double> ns{1e2, 1e3, 1e4, 1e5, 1e6, 1e7};
  for (auto _ : state)
    benchmark::DoNotOptimize(dmlimits::asymptotic_table(0.5, 1.0, 0.4, 1.0, ns, exec_of(state)));
}
BENCHMARK(BM_MalaTable)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
