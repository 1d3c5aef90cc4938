// Serial reference kernels against the OpenMP versions.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "spectral/reference.hpp"
#include "spectral/scaling.hpp"
#include "spectral/synthetic.hpp"
#include "spectral/theory.hpp"

namespace {

spectral::Tensor random_map(std::size_t n) {
  std::mt19937_64 rng(n);
  std::normal_distribution<double> g;
  spectral::Tensor t = spectral::Tensor::square(n);
  for (double& v : t.values()) v = g(rng);
  return t;
}

void BM_dft2_reference(benchmark::State& st) {
  const auto t = random_map(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(spectral::reference::dft2(t));
}

void BM_dft2_parallel(benchmark::State& st) {
  const auto t = random_map(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(spectral::dft2(t));
}

void BM_convolve_reference(benchmark::State& st) {
  const auto t = random_map(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(spectral::reference::convolve_periodic(t, spectral::Kernel3x3::box()));
}

void BM_convolve_parallel(benchmark::State& st) {
  const auto t = random_map(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(spectral::convolve_periodic(t, spectral::Kernel3x3::box()));
}

void BM_pool_reference(benchmark::State& st) {
  const auto t = random_map(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(spectral::reference::average_pool(t, 2));
}

void BM_pool_parallel(benchmark::State& st) {
  const auto t = random_map(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(spectral::average_pool(t, 2));
}

void BM_ensemble_reference(benchmark::State& st) {
  const auto items = spectral::power_law_ensemble(64, static_cast<std::size_t>(st.range(0)), -2.0, 42);
  for (auto _ : st) benchmark::DoNotOptimize(spectral::reference::ensemble_spectrum(items));
}

void BM_ensemble_parallel(benchmark::State& st) {
  const auto items = spectral::power_law_ensemble(64, static_cast<std::size_t>(st.range(0)), -2.0, 42);
  for (auto _ : st) benchmark::DoNotOptimize(spectral::ensemble_spectrum(items));
}

}  // namespace

BENCHMARK(BM_dft2_reference)->Arg(64)->Arg(224)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_dft2_parallel)->Arg(64)->Arg(224)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_convolve_reference)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_convolve_parallel)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_pool_reference)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_pool_parallel)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ensemble_reference)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ensemble_parallel)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
