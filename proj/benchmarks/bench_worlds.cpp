#include <benchmark/benchmark.h>

#include "latentplan/worlds.hpp"

namespace {

using latentplan::worlds::WorldKind;
using latentplan::worlds::WorldSpec;

WorldKind kind_of(int i) {
  switch (i) {
    case 0: return WorldKind::kBoxManipulation;
    case 1: return WorldKind::kShelfArrangement;
    default: return WorldKind::kBoxStacking;
  }
}

void BM_EnumerateStates(benchmark::State& state) {
  const WorldSpec world = WorldSpec::make(kind_of(static_cast<int>(state.range(0))));
  for (auto _ : state) {
    benchmark::DoNotOptimize(world.enumerate_states());
  }
}
BENCHMARK(BM_EnumerateStates)->DenseRange(0, 2);

void BM_LegalTransitions(benchmark::State& state) {
  const WorldSpec world = WorldSpec::make(kind_of(static_cast<int>(state.range(0))));
  for (auto _ : state) {
    benchmark::DoNotOptimize(world.legal_transitions());
  }
}
BENCHMARK(BM_LegalTransitions)->DenseRange(0, 2);

void BM_AdjacencyQueries(benchmark::State& state) {
  const WorldSpec world = WorldSpec::make(kind_of(static_cast<int>(state.range(0))));
  const auto states = world.enumerate_states();
  std::size_t i = 0, j = states.size() / 2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(world.is_legal_transition(states[i], states[j]));
    i = (i + 1) % states.size();
    j = (j + 7) % states.size();
  }
}
BENCHMARK(BM_AdjacencyQueries)->DenseRange(0, 2);

}  // namespace

BENCHMARK_MAIN();
