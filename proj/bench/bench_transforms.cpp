#include <benchmark/benchmark.h>

#include <random>

#include "sparsedct/harness.hpp"
#include "sparsedct/sparse_ifft.hpp"
#include "sparsedct/transforms.hpp"

using namespace sparsedct;

namespace {

ComplexVector random_vector(std::size_t n) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  ComplexVector v(n);
  for (auto& e : v) e = {d(rng), d(rng)};
  return v;
}

ComplexVector block_spectrum(unsigned j, std::size_t m) {
  TrialSpec spec;
  spec.n_exp = j;
  spec.block_length = m;
  spec.seed = 11;
  const Instance inst = gen_instance(spec);
  return fft_radix2(ComplexVector(inst.y.begin(), inst.y.end()));
}

void BM_IfftSerial(benchmark::State& state) {
  const auto v = random_vector(std::size_t{1} << state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ifft_radix2(v));
}

void BM_IfftParallel(benchmark::State& state) {
  const auto v = random_vector(std::size_t{1} << state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ifft_radix2_parallel(v));
}

void BM_NaiveDft(benchmark::State& state) {
  const auto v = random_vector(std::size_t{1} << state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(naive_dft(v));
}

void BM_NaiveDftParallel(benchmark::State& state) {
  const auto v = random_vector(std::size_t{1} << state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(naive_dft_parallel(v));
}

void BM_SparseReconstruct(benchmark::State& state) {
  const auto spectrum = block_spectrum(static_cast<unsigned>(state.range(0)),
                                       static_cast<std::size_t>(state.range(1)));
  const AlgorithmConfig config{1e-4, 0, CompareMode::Signed, false};
  for (auto _ : state) {
    state.PauseTiming();
    DenseOracle oracle(spectrum);
    state.ResumeTiming();
    benchmark::DoNotOptimize(reconstruct(oracle, config));
  }
}

}  // namespace

BENCHMARK(BM_IfftSerial)->DenseRange(14, 21, 7)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_IfftParallel)->DenseRange(14, 21, 7)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NaiveDft)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NaiveDftParallel)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SparseReconstruct)
    ->Args({21, 10})
    ->Args({21, 100})
    ->Args({21, 1000})
    ->Args({21, 10000})
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
