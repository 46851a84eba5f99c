#include <benchmark/benchmark.h>

#include "gzavg/average.hpp"
#include "gzavg/kernel.hpp"
#include "gzavg/oldforms.hpp"
#include "gzavg/quadratic.hpp"
#include "gzavg/special.hpp"

using namespace gzavg;

static void BM_RepNumber(benchmark::State& state) {
  const FieldData f = validate_discriminant(-23);
  const ClassGroup g = class_group(f);
  for (auto _ : state) {
    i64 acc = 0;
    for (i64 m = 1; m <= state.range(0); ++m)
      for (const auto& form : g.classes) acc += rep_number(form, f, m);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RepNumber)->Arg(100)->Arg(1000);

static void BM_LegendreQ(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  double x = 1.0001;
  for (auto _ : state) {
    benchmark::DoNotOptimize(legendre_q(n, x));
    x = x < 50.0 ? x * 1.01 : 1.0001;
  }
}
BENCHMARK(BM_LegendreQ)->Arg(1)->Arg(2)->Arg(5);

static void BM_KernelCoefficient(benchmark::State& state) {
  const FieldData f = validate_discriminant(-7);
  const ClassGroup g = class_group(f);
  const auto params = make_kernel_params(f, g.principal_form(), 2, state.range(0), 1, 1e-4);
  for (auto _ : state) benchmark::DoNotOptimize(kernel_coefficient(params));
}
BENCHMARK(BM_KernelCoefficient)->Arg(2)->Arg(11)->Arg(121)->Unit(benchmark::kMillisecond);

static void BM_Gram(benchmark::State& state) {
  const FieldData f = validate_discriminant(-7);
  const auto s = with_theta(satake_from_ap(101, 4, 300.0), f);
  for (auto _ : state) benchmark::DoNotOptimize(orthogonalize(gram(OriginLevel::One, s), s));
}
BENCHMARK(BM_Gram);

static void BM_Certify(benchmark::State& state) {
  const FieldData f = validate_discriminant(-7);
  const ClassGroup g = class_group(f);
  for (auto _ : state)
    benchmark::DoNotOptimize(certify_nonvanishing(2, state.range(0), f, g.principal_form(), 1e-6));
}
BENCHMARK(BM_Certify)->Arg(53)->Arg(409)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
