// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

// Serial reference kernels against their OpenMP counterparts on the scratch
// model's layer shapes.

#include <benchmark/benchmark.h>

#include <vector>

#include "herbclf/nn/kernels.hpp"
#include "herbclf/rng.hpp"

namespace
{

using namespace herbclf::nn;

std::vector<float> Random(std::size_t n, std::uint64_t seed)
{
  herbclf::Rng rng(seed);
  std::vector<float> v(n);
  for (auto &x : v) x = static_cast<float>(rng.Uniform(-1, 1));
  return v;
}

// Stage index 0..2 of the scratch network at batch 8.
ConvShape Stage(int stage)
{
  static constexpr std::size_t in[] = {3, 32, 64}, out[] = {32, 64, 128}, side[] = {128, 64, 32};
  return ConvShape{8, in[stage], side[stage], side[stage], out[stage], 3, 1, 1};
}

template <Backend B>
void BM_ConvForward(benchmark::State &state)
{
  const auto s = Stage(static_cast<int>(state.range(0)));
  const auto x = Random(s.batch * s.in_channels * s.height * s.width, 1);
  const auto w = Random(s.out_channels * s.patch_size(), 2);
  const auto b = Random(s.out_channels, 3);
  std::vector<float> y(s.batch * s.out_channels * s.out_height() * s.out_width());
  ScopedBackend scoped(B);
  for (auto _ : state)
  {
    kernels::Conv2dForward(s, x.data(), w.data(), b.data(), y.data());
    benchmark::DoNotOptimize(y.data());
  }
  state.counters["GFLOP/s"] = benchmark::Counter(
      2.0 * static_cast<double>(y.size() * s.patch_size()), benchmark::Counter::kIsIterationInvariantRate,
      benchmark::Counter::kIs1000);
}

template <Backend B>
void BM_ConvBackward(benchmark::State &state)
{
  const auto s = Stage(static_cast<int>(state.range(0)));
  const auto x = Random(s.batch * s.in_channels * s.height * s.width, 1);
  const auto w = Random(s.out_channels * s.patch_size(), 2);
  const auto dy = Random(s.batch * s.out_channels * s.out_height() * s.out_width(), 3);
  std::vector<float> dx(x.size()), dw(w.size()), db(s.out_channels);
  ScopedBackend scoped(B);
  for (auto _ : state)
  {
    kernels::Conv2dBackward(s, x.data(), w.data(), dy.data(), dx.data(), dw.data(), db.data());
    benchmark::DoNotOptimize(dx.data());
  }
}

// The 32768 -> 512 hidden layer.
template <Backend B>
void BM_HiddenLinear(benchmark::State &state)
{
  const std::size_t rows = 8, in = 32768, out = 512;
  const auto x = Random(rows * in, 4), w = Random(out * in, 5), b = Random(out, 6);
  std::vector<float> y(rows * out);
  ScopedBackend scoped(B);
  for (auto _ : state)
  {
    kernels::LinearForward(rows, in, out, x.data(), w.data(), b.data(), y.data());
    benchmark::DoNotOptimize(y.data());
  }
}

template <Backend B>
void BM_Gemm(benchmark::State &state)
{
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = Random(n * n, 7), b = Random(n * n, 8);
  std::vector<float> c(n * n);
  ScopedBackend scoped(B);
  for (auto _ : state)
  {
    kernels::Gemm(false, false, n, n, n, a.data(), b.data(), c.data(), false);
    benchmark::DoNotOptimize(c.data());
  }
  state.counters["GFLOP/s"] = benchmark::Counter(2.0 * static_cast<double>(n * n * n),
                                                 benchmark::Counter::kIsIterationInvariantRate,
                                                 benchmark::Counter::kIs1000);
}

template <Backend B>
void BM_AdamStep(benchmark::State &state)
{
  const std::size_t n = 1 << 22;
  auto p = Random(n, 9);
  const auto g = Random(n, 10);
  std::vector<float> m(n), v(n);
  AdamStepArgs args;
  ScopedBackend scoped(B);
  for (auto _ : state)
  {
    kernels::AdamStep(n, p.data(), g.data(), m.data(), v.data(), args);
    benchmark::DoNotOptimize(p.data());
  }
}

BENCHMARK(BM_ConvForward<Backend::serial>)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConvForward<Backend::omp>)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConvBackward<Backend::serial>)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConvBackward<Backend::omp>)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HiddenLinear<Backend::serial>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HiddenLinear<Backend::omp>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Gemm<Backend::serial>)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Gemm<Backend::omp>)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AdamStep<Backend::serial>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AdamStep<Backend::omp>)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
