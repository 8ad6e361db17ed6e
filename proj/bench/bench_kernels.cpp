// OpenMP kernels against their serial references.
#include <benchmark/benchmark.h>

#include <random>

#include "quadgrowth/chain.hpp"
#include "quadgrowth/numseries.hpp"
#include "quadgrowth/oracle.hpp"
#include "quadgrowth/skeleton.hpp"

namespace {

std::vector<long double> random_series(int n, unsigned seed) {
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<long double> u(-1, 1);
  std::vector<long double> v(n + 1);
  for (auto& x : v) x = u(g);
  return v;
}

void BM_mul(benchmark::State& st) {
  int n = static_cast<int>(st.range(0));
  bool par = st.range(1);
  auto a = random_series(n, 1), b = random_series(n, 2);
  for (auto _ : st) benchmark::DoNotOptimize(par ? qg::num::mul(a, b, n) : qg::num::mul_serial(a, b, n));
}
BENCHMARK(BM_mul)->ArgsProduct({{1024, 5100}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_exim(benchmark::State& st) {
  bool par = st.range(0);
  for (auto _ : st) benchmark::DoNotOptimize(qg::exim_moments(5000, par));
}
BENCHMARK(BM_exim)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_peeling(benchmark::State& st) {
  bool par = st.range(0);
  for (auto _ : st) benchmark::DoNotOptimize(qg::enumerate_peeling(4, 5, par));
}
BENCHMARK(BM_peeling)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_hulls(benchmark::State& st) {
  bool par = st.range(0);
  for (auto _ : st) benchmark::DoNotOptimize(qg::sample_hulls(5, 200, 3, true, par));
}
BENCHMARK(BM_hulls)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
