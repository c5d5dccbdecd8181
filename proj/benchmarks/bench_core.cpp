#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "conecode/models.hpp"
#include "conecode/pipeline.hpp"
#include "conecode/reduction.hpp"
#include "conecode/rounding.hpp"

using namespace conecode;

namespace {

Allocation build_uniform(int depth) {
  SemimeasureTable M = realize(ModelSpec::uniform(), depth);
  return build_allocation({pad_and_round(M, margin_linear(depth))});
}

void BM_FloorStrict(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::vector<Dyadic> values;
  for (int i = 0; i < 1024; ++i) values.emplace_back(rng() % (1 << 20) + 1, 24);
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(values[i++ & 1023].floor_strict(17));
  }
}
BENCHMARK(BM_FloorStrict);

void BM_PadAndRound(benchmark::State& state) {
  int depth = int(state.range(0));
  SemimeasureTable M = realize(ModelSpec::bernoulli(Dyadic(3, 2)), depth);
  MarginSchedule d = margin_linear(depth);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pad_and_round(M, d));
  }
  state.SetItemsProcessed(state.iterations() * int64_t(M.node_count()));
}
BENCHMARK(BM_PadAndRound)->Arg(6)->Arg(8);

void BM_BuildAllocation(benchmark::State& state) {
  int depth = int(state.range(0));
  SemimeasureTable M = realize(ModelSpec::uniform(), depth);
  RoundedTable r = pad_and_round(M, margin_linear(depth));
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_allocation({r}));
  }
}
BENCHMARK(BM_BuildAllocation)->Arg(6)->Arg(8);

void BM_ApplyMap(benchmark::State& state) {
  Allocation a = build_uniform(8);
  int L = a.schedule().max_granularity();
  std::mt19937_64 rng(2);
  uint64_t mask = (uint64_t(1) << L) - 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(a.apply_map(BitString(rng() & mask, L)));
  }
}
BENCHMARK(BM_ApplyMap);

void BM_EncodeDecode(benchmark::State& state) {
  Allocation a = build_uniform(8);
  std::mt19937_64 rng(3);
  for (auto _ : state) {
    BitString x(rng() & 0xFF, 8);
    BitString code = encode(a, x);
    benchmark::DoNotOptimize(decode(a, code, 8));
  }
}
BENCHMARK(BM_EncodeDecode);

void BM_StreamCompress(benchmark::State& state) {
  ModelSpec model = ModelSpec::bernoulli(Dyadic(3, 2));
  BudgetSchedule t = budget_schedule_of(model, 12, 4);
  Allocation a = build_allocation({pad_and_round(realize(model, 12), t)});
  std::mt19937_64 rng(4);
  for (auto _ : state) {
    CodeStream stream(a);
    uint64_t bits = rng();
    for (int i = 0; i < 12; ++i) stream.push_target_bit(int(bits >> i) & 1);
    benchmark::DoNotOptimize(stream.finalize());
  }
  state.SetItemsProcessed(state.iterations() * 12);
}
BENCHMARK(BM_StreamCompress);

}  // namespace

BENCHMARK_MAIN();
