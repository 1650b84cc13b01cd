// Serial references against the OpenMP and FFT kernels.

#include <benchmark/benchmark.h>
#include <omp.h>

#include <random>

#include "scalekit/convolution.hpp"
#include "scalekit/spectral.hpp"
#include "scalekit/stability.hpp"
#include "test_util.hpp"

using namespace scalekit;

namespace {

// T time slices over a p = 2 window of width w, fully populated.
ScaleTimeSignal dense_signal(std::size_t len, int w, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ScaleTimeSignal s(2, len);
  for (std::size_t n = 0; n < len; ++n)
    for (int i = 0; i < w; ++i)
      for (int j = 0; j < w; ++j) s[n].set({i, j}, testing::random_complex(rng));
  return s;
}

struct ThreadScope {
  int saved = omp_get_max_threads();
  explicit ThreadScope(int n) { omp_set_num_threads(n > 0 ? n : saved); }
  ~ThreadScope() { omp_set_num_threads(saved); }
};

void BM_ConvolveBruteForce(benchmark::State& st) {
  const auto h = dense_signal(st.range(0), static_cast<int>(st.range(1)), 1);
  const auto u = dense_signal(st.range(0), static_cast<int>(st.range(1)), 2);
  for (auto _ : st) benchmark::DoNotOptimize(brute_force_double_convolve(h, u));
}

// range(2): OpenMP threads, 0 = all.
void BM_ConvolveDirect(benchmark::State& st) {
  const auto h = dense_signal(st.range(0), static_cast<int>(st.range(1)), 1);
  const auto u = dense_signal(st.range(0), static_cast<int>(st.range(1)), 2);
  ThreadScope threads(static_cast<int>(st.range(2)));
  for (auto _ : st) benchmark::DoNotOptimize(double_convolve(h, u));
}

void BM_ConvolveSpectral(benchmark::State& st) {
  const auto h = dense_signal(st.range(0), static_cast<int>(st.range(1)), 1);
  const auto u = dense_signal(st.range(0), static_cast<int>(st.range(1)), 2);
  ThreadScope threads(static_cast<int>(st.range(2)));
  for (auto _ : st) benchmark::DoNotOptimize(double_convolve_spectral(h, u));
}

void BM_FourierDirect(benchmark::State& st) {
  const auto x = dense_signal(1, static_cast<int>(st.range(0)), 3)[0];
  const std::vector<int> grid(2, static_cast<int>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(gamma_fourier_direct(x, grid));
}

void BM_FourierFft(benchmark::State& st) {
  const auto x = dense_signal(1, static_cast<int>(st.range(0)), 3)[0];
  const std::vector<int> grid(2, static_cast<int>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(gamma_fourier(x, grid));
}

void BM_DissipativitySup(benchmark::State& st) {
  const auto h = dense_signal(3, 4, 4);
  ThreadScope threads(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(dissipativity_check(h, 0, 0));
}

}  // namespace

BENCHMARK(BM_ConvolveBruteForce)->Args({4, 8})->Args({8, 16})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConvolveDirect)
    ->Args({4, 8, 1})->Args({4, 8, 0})
    ->Args({8, 16, 1})->Args({8, 16, 0})
    ->Args({16, 32, 1})->Args({16, 32, 0})
    ->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ConvolveSpectral)
    ->Args({4, 8, 1})->Args({4, 8, 0})
    ->Args({8, 16, 1})->Args({8, 16, 0})
    ->Args({16, 32, 1})->Args({16, 32, 0})
    ->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_FourierDirect)->Args({8, 64})->Args({16, 128})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_FourierFft)->Args({8, 64})->Args({16, 128})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_DissipativitySup)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
