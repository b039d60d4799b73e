// Serial reference loops against the OpenMP kernels at the 400 x 100 grid size.
#include <benchmark/benchmark.h>

#include <random>

#include "otfs/experiment.hpp"
#include "otfs/frame.hpp"
#include "otfs/kernels.hpp"
#include "otfs/random.hpp"

namespace {

using namespace otfs;

CMatrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  CMatrix m(r, c);
  for (auto& v : m.storage()) v = complex_normal(rng, 1.0);
  return m;
}

TargetSet four_targets() {
  TargetSet t(4);
  for (std::size_t p = 0; p < 4; ++p) {
    t[p].delay = 7 * p + 3;
    t[p].doppler = -3000.0 + 1700.0 * p;
    t[p].alpha = Complex(1.0, 0.1 * p);
  }
  return t;
}

template <bool Parallel>
void BM_DftRows(benchmark::State& st) {
  CMatrix m = random_matrix(100, 400, 1);
  for (auto _ : st) {
    if constexpr (Parallel) kernels::dft_rows(m, fft::Direction::forward);
    else reference::dft_rows(m, fft::Direction::forward);
    benchmark::DoNotOptimize(m.data());
  }
}

template <bool Parallel>
void BM_DftCols(benchmark::State& st) {
  CMatrix m = random_matrix(100, 400, 2);
  for (auto _ : st) {
    if constexpr (Parallel) kernels::dft_cols(m, fft::Direction::forward);
    else reference::dft_cols(m, fft::Direction::forward);
    benchmark::DoNotOptimize(m.data());
  }
}

template <bool Parallel>
void BM_Echo(benchmark::State& st) {
  const CMatrix s = random_matrix(1, 40000, 3);
  const TargetSet t = four_targets();
  CVector out(s.size());
  for (auto _ : st) {
    std::fill(out.begin(), out.end(), Complex{});
    if constexpr (Parallel) kernels::accumulate_echo(s.storage(), t, 1.0 / 12e6, out);
    else reference::accumulate_echo(s.storage(), t, 1.0 / 12e6, out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_MaskedDivide(benchmark::State& st) {
  const CMatrix a = random_matrix(80, 450, 4), b = random_matrix(80, 450, 5);
  CMatrix out;
  Mask mask;
  for (auto _ : st) {
    if constexpr (Parallel) kernels::masked_divide(a, b, 7.0, out, mask);
    else reference::masked_divide(a, b, 7.0, out, mask);
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_OffGrid(benchmark::State& st) {
  const CMatrix a = random_matrix(80, 450, 6);
  for (auto _ : st) {
    Complex v = Parallel ? kernels::offgrid_coefficient(a, 12.3, 4.56) : reference::offgrid_coefficient(a, 12.3, 4.56);
    benchmark::DoNotOptimize(v);
  }
}

void BM_Trial(benchmark::State& st) {
  SystemConfig cfg;
  cfg.fc = 5e9;
  cfg.B = 12e6;
  cfg.M = 400;
  cfg.N = 100;
  cfg.P = 4;
  cfg.Q = 50;
  cfg.Mtilde = 500;
  cfg.sigma_w2 = 0.1;
  TargetSpec ts;
  ts.random = true;
  ts.sigma2 = {1.0};
  ts.nu_max = 4630.0;
  std::uint64_t seed = 1;
  for (auto _ : st) benchmark::DoNotOptimize(run_trial(cfg, ts, seed++, false));
}

}  // namespace

BENCHMARK(BM_DftRows<false>)->Name("dft_rows/serial");
BENCHMARK(BM_DftRows<true>)->Name("dft_rows/omp");
BENCHMARK(BM_DftCols<false>)->Name("dft_cols/serial");
BENCHMARK(BM_DftCols<true>)->Name("dft_cols/omp");
BENCHMARK(BM_Echo<false>)->Name("echo/serial");
BENCHMARK(BM_Echo<true>)->Name("echo/omp");
BENCHMARK(BM_MaskedDivide<false>)->Name("masked_divide/serial");
BENCHMARK(BM_MaskedDivide<true>)->Name("masked_divide/omp");
BENCHMARK(BM_OffGrid<false>)->Name("offgrid/serial");
BENCHMARK(BM_OffGrid<true>)->Name("offgrid/omp");
BENCHMARK(BM_Trial)->Name("trial/four_targets")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
