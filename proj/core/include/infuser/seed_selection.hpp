#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "infuser/graph.hpp"
#include "infuser/propagation.hpp"

namespace infuser {

// Per-simulation set of component labels already covered by the seed set.
// At most |S| labels per simulation, kept sorted.
class SeedLabelSets {
 public:
  SeedLabelSets() = default;
  explicit SeedLabelSets(std::size_t simulations) : sets_(simulations) {}

  std::size_t simulations() const noexcept { return sets_.size(); }
  bool contains(std::size_t r, Label label) const;
  // Returns false if the label was already present.
  bool insert(std::size_t r, Label label);
  std::span<const Label> labels(std::size_t r) const noexcept { return sets_[r]; }

 private:
  std::vector<std::vector<Label>> sets_;
};

// One CELF dequeue. Stale and fresh gains are equal for commits.
struct TraceRecord {
  VertexId vertex;
  std::uint64_t stale_gain;
  std::uint64_t fresh_gain;
  bool committed;
};

struct SeedState {
  explicit SeedState(std::size_t n, std::size_t simulations)
      : seed_labels(simulations), iter(n, 0), in_seeds(n, 0) {}

  std::vector<VertexId> seeds;
  // Gain credited at each commit, in vertex x simulation units.
  std::vector<std::uint64_t> commit_gains;
  SeedLabelSets seed_labels;
  // |S| at the vertex's last gain refresh.
  std::vector<std::uint32_t> iter;
  std::vector<std::uint8_t> in_seeds;
  std::uint64_t sigma = 0;
};

struct SelectionResult {
  std::vector<VertexId> seeds;
  std::vector<std::uint64_t> commit_gains;
  // Sum over simulations of the covered vertex count.
  std::uint64_t sigma = 0;
  std::size_t simulations = 0;
  std::vector<TraceRecord> trace;

  double influence() const noexcept {
    return simulations == 0 ? 0.0 : static_cast<double>(sigma) / static_cast<double>(simulations);
  }
};

// Gain of adding u: sum over r of sizes[l_u[r]][r] when l_u[r] is not yet
// covered in simulation r.
std::uint64_t marginal_gain(VertexId u, const LabelMatrix& labels, const ComponentSizeTable& sizes,
                            const SeedLabelSets& seed_labels);

// Appends u to S, records its labels as covered and credits `gain` to sigma.
// Throws std::logic_error if u is already a seed.
void commit_seed(VertexId u, std::uint64_t gain, const LabelMatrix& labels, SeedState& state);

// CELF over memoized labels. The first dequeue commits argmax(mg0); ties
// break toward the smaller vertex ID throughout.
SelectionResult select_seeds(const Graph& g, const LabelMatrix& labels, const ComponentSizeTable& sizes,
                             std::span<const std::uint64_t> mg0, std::size_t k);

struct InfuserRun {
  SelectionResult selection;
  PropagationStats propagation;
};

// Hash table, randoms, propagation, sizes, gains and CELF in one call.
InfuserRun run_infuser(const Graph& g, std::size_t k, std::size_t simulations, std::uint64_t master_seed);

// CSV: vertex,stale_gain,fresh_gain,committed. Vertices are written as
// original IDs when a graph is given.
void write_trace_csv(std::span<const TraceRecord> trace, std::ostream& out, const Graph* g = nullptr);

}  // namespace infuser
