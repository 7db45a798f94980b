// Serial references against the OpenMP kernels on the merged builtin registry.

#include <benchmark/benchmark.h>

#include "ckc/diagnosis.hpp"
#include "ckc/learning_graph.hpp"
#include "ckc/packs.hpp"
#include "ckc/parallel.hpp"
#include "ckc/relations.hpp"

namespace {

using namespace ckc;

const Registry& merged() {
  static const Registry reg =
      Registry::merge({load_builtin("addition"), load_builtin("fractions"), load_builtin("triangle")});
  return reg;
}

const Trace& mixed_trace() {
  static const Trace trace{{{parse_term("(state 16 4)"), parse_term("(state 17 3)"), Verdict::Valid},
                            {parse_term("(state 17 3)"), parse_term("(state 18 2)"), Verdict::Valid},
                            {parse_term("(add 16 23)"), parse_term("(num 39)"), Verdict::Valid}}};
  return trace;
}

void BM_GraphSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(serial::build_graph(merged()));
}

void BM_GraphParallel(benchmark::State& state) {
  set_worker_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_graph(merged()));
}

void BM_PartitionSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(serial::concept_partition(merged()));
}

void BM_PartitionParallel(benchmark::State& state) {
  set_worker_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(concept_partition(merged()));
}

void BM_DiagnoseSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(serial::diagnose(merged(), mixed_trace()));
}

void BM_DiagnoseParallel(benchmark::State& state) {
  set_worker_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(diagnose(merged(), mixed_trace()));
}

}  // namespace

BENCHMARK(BM_GraphSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GraphParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PartitionSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PartitionParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DiagnoseSerial)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_DiagnoseParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
