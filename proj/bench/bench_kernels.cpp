// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "hypercross/approximation.hpp"
#include "hypercross/box_scan.hpp"
#include "hypercross/kernels.hpp"
#include "hypercross/moments.hpp"
#include "hypercross/quadrature.hpp"
#include "hypercross/tensor_quadrature.hpp"

using namespace hypercross;

namespace {

const std::vector<int> kBox{40, 40, 40};

bool keep(std::span<const int> s) { return 0.6 * s[0] + 0.7 * s[1] + 0.8 * s[2] <= 30.0; }

void BM_BoxScanSerial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(box_scan_serial(kBox, keep));
}
void BM_BoxScanParallel(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(box_scan_parallel(kBox, keep));
}

auto level_power = [](double x) { return std::pow(std::abs(level_kernel(4, x)), 1.5); };

void BM_PeriodSumsSerial(benchmark::State& st) {
  std::vector<double> out;
  for (auto _ : st) {
    period_sums_serial(level_power, 2 * std::numbers::pi, 1024, 0, 256, out);
    benchmark::DoNotOptimize(out.data());
  }
}
void BM_PeriodSumsParallel(benchmark::State& st) {
  std::vector<double> out;
  for (auto _ : st) {
    period_sums_parallel(level_power, 2 * std::numbers::pi, 1024, 0, 256, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_MomentTable(benchmark::State& st) {
  const bool parallel = st.range(0) != 0;
  for (auto _ : st) benchmark::DoNotOptimize(MomentTable(16, parallel));
}

void BM_FourthPower(benchmark::State& st) {
  const BlockFunction f = random_block_function(2, static_cast<int>(st.range(0)), 3);
  for (auto _ : st) benchmark::DoNotOptimize(l4_power(f, true));
  st.counters["blocks"] = static_cast<double>(f.size());
}
void BM_FourthPowerSerial(benchmark::State& st) {
  const BlockFunction f = random_block_function(2, static_cast<int>(st.range(0)), 3);
  for (auto _ : st) benchmark::DoNotOptimize(l4_power(f, false));
}
void BM_FourthPowerReference(benchmark::State& st) {
  const BlockFunction f = random_block_function(2, static_cast<int>(st.range(0)), 3);
  for (auto _ : st) benchmark::DoNotOptimize(l4_power_reference(f));
}

void BM_TensorQuadrature(benchmark::State& st) {
  const BlockFunction f = random_block_function(2, 3, 5);
  TensorQuadratureOptions o;
  o.periods = 4;
  o.parallel = st.range(0) != 0;
  o.reference = st.range(1) != 0;
  for (auto _ : st) benchmark::DoNotOptimize(tensor_power_integral(f, 3.0, o));
}

}  // namespace

BENCHMARK(BM_BoxScanSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BoxScanParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PeriodSumsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PeriodSumsParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MomentTable)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FourthPower)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_FourthPowerSerial)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_FourthPowerReference)->Arg(4)->Arg(6)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_TensorQuadrature)->Args({0, 0})->Args({1, 0})->Args({0, 1})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
