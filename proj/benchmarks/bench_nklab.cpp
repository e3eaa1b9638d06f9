#include <benchmark/benchmark.h>

#include "nklab/lagrangian.hpp"
#include "nklab/nk.hpp"
#include "nklab/normal_forms.hpp"

namespace {

using namespace nklab;

void bench_tensor_g(benchmark::State& state) {
  Rng rng(42);
  ProductPoint p{sample_point(rng), sample_point(rng)};
  TangentPair x{p, sample_sl2_elem(rng), sample_sl2_elem(rng)};
  TangentPair y{p, sample_sl2_elem(rng), sample_sl2_elem(rng)};
  for (auto _ : state) benchmark::DoNotOptimize(tensor_G(x, y));
}
BENCHMARK(bench_tensor_g);

void bench_curvature(benchmark::State& state) {
  Rng rng(42);
  ProductPoint p{sample_point(rng), sample_point(rng)};
  TangentPair x{p, sample_sl2_elem(rng), sample_sl2_elem(rng)};
  TangentPair y{p, sample_sl2_elem(rng), sample_sl2_elem(rng)};
  TangentPair z{p, sample_sl2_elem(rng), sample_sl2_elem(rng)};
  for (auto _ : state) benchmark::DoNotOptimize(curvature_R(x, y, z));
}
BENCHMARK(bench_curvature);

void bench_classify_round_trip(benchmark::State& state) {
  int case_id = static_cast<int>(state.range(0));
  Rng rng(42);
  ParamMap params = sample_case_params(case_id, rng);
  OperatorPair pair = generate(case_id, params, 7);
  for (auto _ : state) benchmark::DoNotOptimize(classify(pair));
}
BENCHMARK(bench_classify_round_trip)->DenseRange(1, 5);

void bench_second_fundamental_form(benchmark::State& state) {
  ImmersionSpec spec = builtin_immersion("example2");
  Rng rng(42);
  SL2Point u = sample_point(rng);
  for (auto _ : state)
    benchmark::DoNotOptimize(second_fundamental_form(spec, u));
}
BENCHMARK(bench_second_fundamental_form);

}  // namespace

BENCHMARK_MAIN();
