#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "hitlab/closure.hpp"
#include "hitlab/evolve.hpp"
#include "hitlab/spectra.hpp"
#include "hitlab/temporal.hpp"

using namespace hitlab;

namespace {

SpectralState bench_state(std::size_t bins) {
  auto g = make_shared_grid(1.0, 500.0, bins);
  return initial_spectrum(g, {2.0, 1.0, 4}, 1e-3);
}

void BM_Transfer(benchmark::State& st) {
  const auto s = bench_state(static_cast<std::size_t>(st.range(0)));
  transfer_spectrum(s, {});  // builds the cached triad table
  for (auto _ : st) benchmark::DoNotOptimize(transfer_spectrum(s, {}).T.data());
}
BENCHMARK(BM_Transfer)->Arg(64)->Arg(96)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_TransferTableBuild(benchmark::State& st) {
  const auto bins = static_cast<std::size_t>(st.range(0));
  for (auto _ : st) {
    auto g = make_shared_grid(1.0, 500.0, bins);
    TransferOperator op(g);
    benchmark::DoNotOptimize(op.sample_count());
  }
}
BENCHMARK(BM_TransferTableBuild)->Arg(96)->Unit(benchmark::kMillisecond);

void BM_Step(benchmark::State& st) {
  auto s = bench_state(96);
  EvolveParams p;
  ForcingSpec f{ForcingMode::band, 2.0, 1.0};
  const double dt = suggest_dt(s, p, f);
  for (auto _ : st) benchmark::DoNotOptimize(step(s, p, f, dt).E.data());
}
BENCHMARK(BM_Step)->Unit(benchmark::kMillisecond);

void BM_Integrate(benchmark::State& st) {
  const auto s = bench_state(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(s.mesh().integrate(s.E));
}
BENCHMARK(BM_Integrate)->Arg(96)->Arg(1024);

void BM_FrequencySpectrum(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  std::vector<std::vector<double>> series(16, std::vector<double>(n));
  for (std::size_t r = 0; r < series.size(); ++r)
    for (std::size_t i = 0; i < n; ++i) series[r][i] = std::sin(0.01 * double(i * (r + 1)));
  for (auto _ : st) benchmark::DoNotOptimize(frequency_spectrum(series, 10.0, n / 8).phi.data());
}
BENCHMARK(BM_FrequencySpectrum)->Arg(1 << 14)->Arg(1 << 17)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
