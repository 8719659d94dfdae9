#pragma once

// Clarity-first reference algorithms: explicit sampling, BFS reachability,
// NewGreedy, RandCas, MixGreedy (CELF) and exhaustive live-edge enumeration.
// Single-threaded; used as oracles for the fused pipeline and as the
// one-sample-per-simulation baseline.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "infuser/edge_hash.hpp"
#include "infuser/graph.hpp"

namespace infuser {

// Live-edge world over a parent graph; reciprocal slots always agree.
class SampledSubgraph {
 public:
  explicit SampledSubgraph(const Graph& parent) : parent_(&parent), edge_in_(parent.m(), 0) {}

  const Graph& parent() const noexcept { return *parent_; }
  bool contains(EdgeSlot slot) const noexcept { return edge_in_[slot] != 0; }
  std::span<const std::uint8_t> bitmap() const noexcept { return edge_in_; }
  std::size_t undirected_edge_count() const noexcept;

  // Sets both directions of the edge behind `slot`.
  void set_edge(EdgeSlot slot, bool present);
  void assign(std::span<const std::uint8_t> bitmap);
  // Direct slot access for samplers that fill both directions themselves.
  std::span<std::uint8_t> mutable_bitmap() noexcept { return edge_in_; }

 private:
  const Graph* parent_;
  std::vector<std::uint8_t> edge_in_;
};

// Simulation r of the hash sampler, materialized.
SampledSubgraph sample_explicit(const Graph& g, const EdgeHashTable& table, const SimulationRandoms& randoms,
                                std::size_t r);
void sample_explicit_into(const EdgeHashTable& table, const SimulationRandoms& randoms, std::size_t r,
                          SampledSubgraph& out);

// Classical draw: one uniform per undirected edge (canonical slot u < v),
// kept iff r <= w, mirrored to the reverse slot.
SampledSubgraph sample_rng(const Graph& g, std::mt19937& rng);
void sample_rng_into(std::mt19937& rng, SampledSubgraph& out);

// BFS closure of `seeds` over sampled edges, sorted ascending.
std::vector<VertexId> reachability(const SampledSubgraph& sub, std::span<const VertexId> seeds);

// Source of live-edge worlds for the greedy references.
class Sampler {
 public:
  virtual ~Sampler() = default;
  // Fills `out` with world `r`. Hash samplers return the same world for the
  // same r; rng samplers draw a fresh world on every call.
  virtual void sample(std::size_t r, SampledSubgraph& out) = 0;
};

class HashSampler final : public Sampler {
 public:
  HashSampler(const EdgeHashTable& table, const SimulationRandoms& randoms) : table_(&table), randoms_(&randoms) {}
  void sample(std::size_t r, SampledSubgraph& out) override;

 private:
  const EdgeHashTable* table_;
  const SimulationRandoms* randoms_;
};

// Same coin sequence as sample_rng_into, but keeps a flat list of canonical
// edges (slot, reverse slot, probability) for the last graph it saw.
class RngSampler final : public Sampler {
 public:
  explicit RngSampler(std::uint32_t seed) : rng_(seed) {}
  void sample(std::size_t r, SampledSubgraph& out) override;

 private:
  struct CanonicalEdge {
    EdgeSlot slot;
    EdgeSlot back;
    double p;
  };
  std::mt19937 rng_;
  const Graph* cached_for_ = nullptr;
  std::size_t cached_m_ = 0;
  std::vector<CanonicalEdge> edges_;
};

struct GreedyResult {
  std::vector<VertexId> seeds;
  // Gain sums (vertex x simulation units) from the final outer iteration.
  std::vector<std::int64_t> gains;
};

// K outer iterations, each over R worlds: gain of v is |R_G'(v)| when v is
// not reached by S. Ties go to the smaller vertex ID.
GreedyResult new_greedy(const Graph& g, std::size_t k, std::size_t simulations, Sampler& sampler);

// Sum over R worlds of |R_G'(S)|.
std::uint64_t reach_sum(const Graph& g, std::span<const VertexId> seeds, std::size_t simulations, Sampler& sampler);
// Mean reachable-set size over R worlds.
double rand_cas(const Graph& g, std::span<const VertexId> seeds, std::size_t simulations, Sampler& sampler);

struct ReferenceSelection {
  std::vector<VertexId> seeds;
  std::vector<std::int64_t> commit_gains;
  std::int64_t sigma = 0;
  std::size_t simulations = 0;
  std::size_t evaluations = 0;
  // False when `stop` ended the run early; seeds then holds a prefix.
  bool completed = true;

  double influence() const noexcept {
    return simulations == 0 ? 0.0 : static_cast<double>(sigma) / static_cast<double>(simulations);
  }
};

// One NewGreedy iteration for the first seed, then CELF with RandCas gains.
// `stop` is polled before every RandCas evaluation.
ReferenceSelection mix_greedy(const Graph& g, std::size_t k, std::size_t simulations, Sampler& sampler,
                              const std::function<bool()>& stop = {});

// Largest edge count accepted by the exhaustive oracle.
inline constexpr std::size_t kMaxExactEdges = 22;

// Expected |reach(S)| summed over every live-edge world, weighted by its
// probability. Uses Graph::undirected_weight per edge.
double exact_influence(const Graph& g, std::span<const VertexId> seeds);
// exact_influence(g, {v}) for every v from one enumeration.
std::vector<double> exact_singleton_influences(const Graph& g);

}  // namespace infuser
