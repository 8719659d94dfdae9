#include <benchmark/benchmark.h>

#include <string>

#include "infuser/edge_hash.hpp"
#include "infuser/graph.hpp"
#include "infuser/propagation.hpp"
#include "infuser/reference.hpp"
#include "infuser/seed_selection.hpp"

namespace {

using namespace infuser;

const Graph& er_graph() {
  static const Graph g = apply_weights(erdos_renyi(50000, 8.0, 1), weights::Constant{0.01}, 1);
  return g;
}

void BM_Murmur3(benchmark::State& state) {
  const std::string key(static_cast<std::size_t>(state.range(0)), 'x');
  for (auto _ : state) benchmark::DoNotOptimize(murmur3_32(key, 0));
  state.SetBytesProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Murmur3)->Arg(8)->Arg(64);

void BM_EdgeHash(benchmark::State& state) {
  VertexId u = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(edge_hash(u, u + 17));
    ++u;
  }
}
BENCHMARK(BM_EdgeHash);

void BM_HashTable(benchmark::State& state) {
  const Graph& g = er_graph();
  for (auto _ : state) benchmark::DoNotOptimize(build_hash_table(g));
}
BENCHMARK(BM_HashTable)->Unit(benchmark::kMillisecond);

void BM_Propagate(benchmark::State& state) {
  const Graph& g = er_graph();
  const EdgeHashTable table = build_hash_table(g);
  const SimulationRandoms randoms(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(propagate(g, table, randoms));
}
BENCHMARK(BM_Propagate)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_SizesAndGains(benchmark::State& state) {
  const Graph& g = er_graph();
  const EdgeHashTable table = build_hash_table(g);
  const SimulationRandoms randoms(256, 1);
  const LabelMatrix labels = propagate(g, table, randoms);
  for (auto _ : state) {
    const auto sizes = component_sizes(labels);
    benchmark::DoNotOptimize(initial_marginal_gains(labels, sizes));
  }
}
BENCHMARK(BM_SizesAndGains)->Unit(benchmark::kMillisecond);

void BM_SelectSeeds(benchmark::State& state) {
  const Graph& g = er_graph();
  const EdgeHashTable table = build_hash_table(g);
  const SimulationRandoms randoms(256, 1);
  const LabelMatrix labels = propagate(g, table, randoms);
  const auto sizes = component_sizes(labels);
  const auto mg0 = initial_marginal_gains(labels, sizes);
  for (auto _ : state) {
    benchmark::DoNotOptimize(select_seeds(g, labels, sizes, mg0, static_cast<std::size_t>(state.range(0))));
  }
}
BENCHMARK(BM_SelectSeeds)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_ExplicitSample(benchmark::State& state) {
  const Graph& g = er_graph();
  const EdgeHashTable table = build_hash_table(g);
  const SimulationRandoms randoms(8, 1);
  SampledSubgraph sub(g);
  for (auto _ : state) {
    sample_explicit_into(table, randoms, 0, sub);
    benchmark::DoNotOptimize(sub.bitmap().data());
  }
}
BENCHMARK(BM_ExplicitSample)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
