#include <benchmark/benchmark.h>

#include "qrm/feynman_kac.hpp"
#include "qrm/perturbation.hpp"
#include "qrm/spectral.hpp"
#include "qrm/zeta.hpp"

using namespace qrm;

static void BM_AssembleEigenRabi2p(benchmark::State& st) {
  const int n = int(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(eigen(assemble(ModelSpec::rabi2p(0.5, 0.2), n)).values[0]);
  st.SetComplexityN(n);
}
BENCHMARK(BM_AssembleEigenRabi2p)->RangeMultiplier(2)->Range(64, 512)->Unit(benchmark::kMillisecond);

static void BM_EigenNoSplit(benchmark::State& st) {
  const int n = int(st.range(0));
  auto op = assemble(ModelSpec::rabi2p(0.5, 0.2), n);
  EigenOptions eo;
  eo.split_blocks = false;
  for (auto _ : st) benchmark::DoNotOptimize(eigen(op, eo).values[0]);
}
BENCHMARK(BM_EigenNoSplit)->RangeMultiplier(2)->Range(64, 256)->Unit(benchmark::kMillisecond);

static void BM_ConvergedNcho(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(converged_spectrum(ModelSpec::ncho(3, 2), 10, 1e-10).values[9]);
}
BENCHMARK(BM_ConvergedNcho)->Unit(benchmark::kMillisecond);

static void BM_FKMatrixElement(benchmark::State& st) {
  auto f = TestVector::constant();
  ModelSpec m = ModelSpec::rak(0.5, 0.2);
  const long n = st.range(0);
  for (auto _ : st) benchmark::DoNotOptimize(fk_matrix_element(m, f, f, 2.0, n, 1).mean);
  st.SetItemsProcessed(st.iterations() * n);
}
BENCHMARK(BM_FKMatrixElement)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_Xi(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(xi(3.0, int(st.range(0))).value);
}
BENCHMARK(BM_Xi)->Arg(256)->Arg(1024);

static void BM_Hurwitz(benchmark::State& st) {
  double s = 1.5;
  for (auto _ : st) {
    benchmark::DoNotOptimize(hurwitz_zeta(s, 0.5).value);
    s += 1e-9;
  }
}
BENCHMARK(BM_Hurwitz);
BENCHMARK_MAIN();
