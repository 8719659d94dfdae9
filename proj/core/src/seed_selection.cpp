#include "infuser/seed_selection.hpp"

#include <algorithm>
#include <ostream>
#include <queue>
#include <stdexcept>

#include "infuser/edge_hash.hpp"
#include "infuser/error.hpp"

namespace infuser {

namespace {

struct QueueEntry {
  std::uint64_t gain;
  VertexId vertex;
};

// Max-heap on gain, smaller vertex ID first among equal gains.
struct QueueOrder {
  bool operator()(const QueueEntry& a, const QueueEntry& b) const noexcept {
    if (a.gain != b.gain) return a.gain < b.gain;
    return a.vertex > b.vertex;
  }
};

}  // namespace

bool SeedLabelSets::contains(std::size_t r, Label label) const {
  const auto& set = sets_[r];
  return std::binary_search(set.begin(), set.end(), label);
}

bool SeedLabelSets::insert(std::size_t r, Label label) {
  auto& set = sets_[r];
  auto it = std::lower_bound(set.begin(), set.end(), label);
  if (it != set.end() && *it == label) return false;
  set.insert(it, label);
  return true;
}

std::uint64_t marginal_gain(VertexId u, const LabelMatrix& labels, const ComponentSizeTable& sizes,
                            const SeedLabelSets& seed_labels) {
  const std::size_t simulations = labels.simulations();
  std::uint64_t gain = 0;
#pragma omp parallel for reduction(+ : gain) schedule(static) if (simulations >= 4096)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(simulations); ++i) {
    const auto r = static_cast<std::size_t>(i);
    const Label l = labels.at(u, r);
    if (!seed_labels.contains(r, l)) gain += sizes.at(l, r);
  }
  return gain;
}

void commit_seed(VertexId u, std::uint64_t gain, const LabelMatrix& labels, SeedState& state) {
  if (state.in_seeds[u] != 0) throw std::logic_error("vertex committed twice");
  state.in_seeds[u] = 1;
  state.seeds.push_back(u);
  state.commit_gains.push_back(gain);
  for (std::size_t r = 0; r < labels.simulations(); ++r) state.seed_labels.insert(r, labels.at(u, r));
  state.sigma += gain;
}

SelectionResult select_seeds(const Graph& g, const LabelMatrix& labels, const ComponentSizeTable& sizes,
                             std::span<const std::uint64_t> mg0, std::size_t k) {
  const std::size_t n = g.n();
  if (k == 0) throw ConstraintError("K must be at least 1");
  if (k > n) throw ConstraintError("K = " + std::to_string(k) + " exceeds n = " + std::to_string(n));
  if (labels.n() != n || mg0.size() != n) throw ConstraintError("labels/gains do not match graph");

  SeedState state(n, labels.simulations());
  std::vector<QueueEntry> heap;
  heap.reserve(n);
  for (std::size_t v = 0; v < n; ++v) heap.push_back({mg0[v], static_cast<VertexId>(v)});
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, QueueOrder> queue(QueueOrder{}, std::move(heap));

  SelectionResult result;
  result.simulations = labels.simulations();
  while (state.seeds.size() < k) {
    const QueueEntry top = queue.top();
    queue.pop();
    const auto seed_count = static_cast<std::uint32_t>(state.seeds.size());
    if (state.iter[top.vertex] == seed_count) {
      commit_seed(top.vertex, top.gain, labels, state);
      result.trace.push_back({top.vertex, top.gain, top.gain, true});
    } else {
      const std::uint64_t fresh = marginal_gain(top.vertex, labels, sizes, state.seed_labels);
      state.iter[top.vertex] = seed_count;
      queue.push({fresh, top.vertex});
      result.trace.push_back({top.vertex, top.gain, fresh, false});
    }
  }
  result.seeds = std::move(state.seeds);
  result.commit_gains = std::move(state.commit_gains);
  result.sigma = state.sigma;
  return result;
}

InfuserRun run_infuser(const Graph& g, std::size_t k, std::size_t simulations, std::uint64_t master_seed) {
  if (k > g.n()) throw ConstraintError("K = " + std::to_string(k) + " exceeds n = " + std::to_string(g.n()));
  const EdgeHashTable table = build_hash_table(g);
  const SimulationRandoms randoms(simulations, master_seed);
  InfuserRun run;
  const LabelMatrix labels = propagate(g, table, randoms, &run.propagation);
  const ComponentSizeTable sizes = component_sizes(labels);
  const auto mg0 = initial_marginal_gains(labels, sizes);
  run.selection = select_seeds(g, labels, sizes, mg0, k);
  return run;
}

void write_trace_csv(std::span<const TraceRecord> trace, std::ostream& out, const Graph* g) {
  out << "vertex,stale_gain,fresh_gain,committed\n";
  for (const auto& rec : trace) {
    out << (g != nullptr ? g->original_id(rec.vertex) : rec.vertex) << ',' << rec.stale_gain << ','
        << rec.fresh_gain << ',' << (rec.committed ? 1 : 0) << '\n';
  }
}

}  // namespace infuser
