#include <benchmark/benchmark.h>

#include "dlab/field.hpp"

static void BM_placeholder(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(1 + 1);
}
BENCHMARK(BM_placeholder);

BENCHMARK_MAIN();
