#include "infuser/reference.hpp"

#include <algorithm>
#include <numeric>

#include "infuser/error.hpp"

namespace infuser {

namespace {

void check_seed_count(const Graph& g, std::size_t k) {
  if (k == 0) throw ConstraintError("K must be at least 1");
  if (k > g.n()) throw ConstraintError("K = " + std::to_string(k) + " exceeds n = " + std::to_string(g.n()));
}

// Reusable BFS state; `stamp[v] == epoch` marks v visited in the current search.
class BfsWorkspace {
 public:
  explicit BfsWorkspace(std::size_t n) : stamp_(n, 0) {}

  void reset() {
    if (++epoch_ == 0) {
      std::fill(stamp_.begin(), stamp_.end(), 0);
      epoch_ = 1;
    }
    queue_.clear();
  }
  bool visited(VertexId v) const noexcept { return stamp_[v] == epoch_; }
  bool visit(VertexId v) {
    if (stamp_[v] == epoch_) return false;
    stamp_[v] = epoch_;
    queue_.push_back(v);
    return true;
  }
  // Expands queued vertices from position `head` over sampled edges; returns
  // the visited count.
  std::size_t expand(const SampledSubgraph& sub, std::size_t head = 0) {
    const Graph& g = sub.parent();
    for (; head < queue_.size(); ++head) {
      const VertexId u = queue_[head];
      for (EdgeSlot s = g.slot_begin(u); s < g.slot_end(u); ++s) {
        if (sub.contains(s)) visit(g.target(s));
      }
    }
    return queue_.size();
  }
  std::span<const VertexId> order() const noexcept { return queue_; }

 private:
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
  std::vector<VertexId> queue_;
};

std::size_t reach_count(const SampledSubgraph& sub, std::span<const VertexId> seeds, BfsWorkspace& ws) {
  ws.reset();
  for (VertexId s : seeds) ws.visit(s);
  return ws.expand(sub);
}

// Simple union-find for world enumeration.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) { std::iota(parent_.begin(), parent_.end(), 0u); }
  VertexId find(VertexId v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }
  void unite(VertexId a, VertexId b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
  }
  std::size_t size_of(VertexId v) { return size_[find(v)]; }

 private:
  std::vector<VertexId> parent_;
  std::vector<std::size_t> size_;
};

struct EdgeTerm {
  VertexId u;
  VertexId v;
  double p;
};

// Calls visit(sets, probability) for every live-edge world.
template <typename Visit>
void enumerate_worlds(const Graph& g, Visit&& visit) {
  if (g.undirected_edge_count() > kMaxExactEdges) {
    throw ConstraintError("exact influence supports at most " + std::to_string(kMaxExactEdges) + " edges, graph has " +
                          std::to_string(g.undirected_edge_count()));
  }
  std::vector<EdgeTerm> certain;
  std::vector<EdgeTerm> uncertain;
  for (VertexId u = 0; u < g.n(); ++u) {
    for (EdgeSlot s = g.slot_begin(u); s < g.slot_end(u); ++s) {
      const VertexId v = g.target(s);
      if (v < u) continue;
      const double p = g.undirected_weight(s);
      if (p >= 1.0) {
        certain.push_back({u, v, p});
      } else if (p > 0.0) {
        uncertain.push_back({u, v, p});
      }
    }
  }
  const std::uint64_t worlds = std::uint64_t{1} << uncertain.size();
  for (std::uint64_t mask = 0; mask < worlds; ++mask) {
    DisjointSets sets(g.n());
    for (const auto& e : certain) sets.unite(e.u, e.v);
    double probability = 1.0;
    for (std::size_t i = 0; i < uncertain.size(); ++i) {
      if ((mask >> i) & 1u) {
        probability *= uncertain[i].p;
        sets.unite(uncertain[i].u, uncertain[i].v);
      } else {
        probability *= 1.0 - uncertain[i].p;
      }
    }
    visit(sets, probability);
  }
}

}  // namespace

std::size_t SampledSubgraph::undirected_edge_count() const noexcept {
  return static_cast<std::size_t>(std::count(edge_in_.begin(), edge_in_.end(), std::uint8_t{1})) / 2;
}

void SampledSubgraph::set_edge(EdgeSlot slot, bool present) {
  edge_in_[slot] = present ? 1 : 0;
  edge_in_[parent_->reverse_slot(slot)] = present ? 1 : 0;
}

void SampledSubgraph::assign(std::span<const std::uint8_t> bitmap) {
  if (bitmap.size() != edge_in_.size()) throw ConstraintError("bitmap size does not match graph");
  std::copy(bitmap.begin(), bitmap.end(), edge_in_.begin());
}

void sample_explicit_into(const EdgeHashTable& table, const SimulationRandoms& randoms, std::size_t r,
                          SampledSubgraph& out) {
  const std::uint32_t x = randoms[r];
  const auto hashes = table.hashes();
  const auto thresholds = table.thresholds();
  auto bitmap = out.mutable_bitmap();
  if (bitmap.size() != hashes.size()) throw ConstraintError("hash table does not match graph");
  for (std::size_t s = 0; s < hashes.size(); ++s) bitmap[s] = in_sample(sample_prob(hashes[s], x), thresholds[s]);
}

SampledSubgraph sample_explicit(const Graph& g, const EdgeHashTable& table, const SimulationRandoms& randoms,
                                std::size_t r) {
  if (r >= randoms.padded()) throw ConstraintError("simulation index out of range");
  SampledSubgraph sub(g);
  sample_explicit_into(table, randoms, r, sub);
  return sub;
}

void sample_rng_into(std::mt19937& rng, SampledSubgraph& out) {
  const Graph& g = out.parent();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto bitmap = out.mutable_bitmap();
  for (VertexId u = 0; u < g.n(); ++u) {
    for (EdgeSlot s = g.slot_begin(u); s < g.slot_end(u); ++s) {
      const VertexId v = g.target(s);
      if (v < u) continue;
      // Source is known here; skip the slot-to-source search in reverse_slot().
      const EdgeSlot back = *g.find_slot(v, u);
      const double p = g.weights_symmetric() ? g.weight(s) : 0.5 * (g.weight(s) + g.weight(back));
      const std::uint8_t keep = unit(rng) <= p ? 1 : 0;
      bitmap[s] = keep;
      bitmap[back] = keep;
    }
  }
}

SampledSubgraph sample_rng(const Graph& g, std::mt19937& rng) {
  SampledSubgraph sub(g);
  sample_rng_into(rng, sub);
  return sub;
}

std::vector<VertexId> reachability(const SampledSubgraph& sub, std::span<const VertexId> seeds) {
  BfsWorkspace ws(sub.parent().n());
  reach_count(sub, seeds, ws);
  std::vector<VertexId> visited(ws.order().begin(), ws.order().end());
  std::sort(visited.begin(), visited.end());
  return visited;
}

void HashSampler::sample(std::size_t r, SampledSubgraph& out) {
  sample_explicit_into(*table_, *randoms_, r % randoms_->simulations(), out);
}

void RngSampler::sample(std::size_t, SampledSubgraph& out) {
  const Graph& g = out.parent();
  if (cached_for_ != &g || cached_m_ != g.m()) {
    edges_.clear();
    for (VertexId u = 0; u < g.n(); ++u) {
      for (EdgeSlot s = g.slot_begin(u); s < g.slot_end(u); ++s) {
        const VertexId v = g.target(s);
        if (v < u) continue;
        const EdgeSlot back = *g.find_slot(v, u);
        edges_.push_back({s, back, g.weights_symmetric() ? g.weight(s) : 0.5 * (g.weight(s) + g.weight(back))});
      }
    }
    cached_for_ = &g;
    cached_m_ = g.m();
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto bitmap = out.mutable_bitmap();
  for (const CanonicalEdge& e : edges_) {
    const std::uint8_t keep = unit(rng_) <= e.p ? 1 : 0;
    bitmap[e.slot] = keep;
    bitmap[e.back] = keep;
  }
}

GreedyResult new_greedy(const Graph& g, std::size_t k, std::size_t simulations, Sampler& sampler) {
  check_seed_count(g, k);
  const std::size_t n = g.n();
  GreedyResult result;
  std::vector<std::uint8_t> in_seeds(n, 0);
  std::vector<std::size_t> component_size(n);
  SampledSubgraph sub(g);
  BfsWorkspace seeds_ws(n);
  BfsWorkspace comp_ws(n);

  for (std::size_t step = 0; step < k; ++step) {
    result.gains.assign(n, 0);
    for (std::size_t r = 0; r < simulations; ++r) {
      sampler.sample(r, sub);
      reach_count(sub, result.seeds, seeds_ws);
      // |R_G'(v)| for every v: one BFS per component.
      comp_ws.reset();
      for (VertexId root = 0; root < n; ++root) {
        if (comp_ws.visited(root)) continue;
        const std::size_t before = comp_ws.order().size();
        comp_ws.visit(root);
        const std::size_t after = comp_ws.expand(sub, before);
        for (std::size_t i = before; i < after; ++i) component_size[comp_ws.order()[i]] = after - before;
      }
      for (VertexId v = 0; v < n; ++v) {
        if (in_seeds[v] == 0 && !seeds_ws.visited(v)) result.gains[v] += static_cast<std::int64_t>(component_size[v]);
      }
    }
    VertexId best = 0;
    bool found = false;
    for (VertexId v = 0; v < n; ++v) {
      if (in_seeds[v] != 0) continue;
      if (!found || result.gains[v] > result.gains[best]) {
        best = v;
        found = true;
      }
    }
    in_seeds[best] = 1;
    result.seeds.push_back(best);
  }
  return result;
}

std::uint64_t reach_sum(const Graph& g, std::span<const VertexId> seeds, std::size_t simulations, Sampler& sampler) {
  SampledSubgraph sub(g);
  BfsWorkspace ws(g.n());
  std::uint64_t total = 0;
  for (std::size_t r = 0; r < simulations; ++r) {
    sampler.sample(r, sub);
    total += reach_count(sub, seeds, ws);
  }
  return total;
}

double rand_cas(const Graph& g, std::span<const VertexId> seeds, std::size_t simulations, Sampler& sampler) {
  if (seeds.empty()) throw ConstraintError("RandCas needs a non-empty seed set");
  if (simulations == 0) throw ConstraintError("need at least one simulation");
  return static_cast<double>(reach_sum(g, seeds, simulations, sampler)) / static_cast<double>(simulations);
}

ReferenceSelection mix_greedy(const Graph& g, std::size_t k, std::size_t simulations, Sampler& sampler,
                              const std::function<bool()>& stop) {
  check_seed_count(g, k);
  const std::size_t n = g.n();
  ReferenceSelection result;
  result.simulations = simulations;

  GreedyResult first = new_greedy(g, 1, simulations, sampler);
  const VertexId s0 = first.seeds.front();
  result.seeds.push_back(s0);
  result.commit_gains.push_back(first.gains[s0]);
  result.sigma = first.gains[s0];

  struct Entry {
    std::int64_t gain;
    VertexId vertex;
  };
  auto order = [](const Entry& a, const Entry& b) {
    if (a.gain != b.gain) return a.gain < b.gain;
    return a.vertex > b.vertex;
  };
  std::vector<Entry> heap;
  for (VertexId v = 0; v < n; ++v) {
    if (v != s0) heap.push_back({first.gains[v], v});
  }
  std::make_heap(heap.begin(), heap.end(), order);
  std::vector<std::size_t> iter(n, 0);
  std::vector<VertexId> candidate;

  while (result.seeds.size() < k) {
    std::pop_heap(heap.begin(), heap.end(), order);
    Entry top = heap.back();
    heap.pop_back();
    if (iter[top.vertex] == result.seeds.size()) {
      result.seeds.push_back(top.vertex);
      result.commit_gains.push_back(top.gain);
      result.sigma += top.gain;
      continue;
    }
    if (stop && stop()) {
      result.completed = false;
      break;
    }
    candidate.assign(result.seeds.begin(), result.seeds.end());
    candidate.push_back(top.vertex);
    top.gain = static_cast<std::int64_t>(reach_sum(g, candidate, simulations, sampler)) - result.sigma;
    ++result.evaluations;
    iter[top.vertex] = result.seeds.size();
    heap.push_back(top);
    std::push_heap(heap.begin(), heap.end(), order);
  }
  return result;
}

double exact_influence(const Graph& g, std::span<const VertexId> seeds) {
  for (VertexId s : seeds) {
    if (s >= g.n()) throw ConstraintError("seed vertex out of range");
  }
  double expected = 0.0;
  std::vector<VertexId> roots;
  enumerate_worlds(g, [&](DisjointSets& sets, double probability) {
    roots.clear();
    std::size_t reached = 0;
    for (VertexId s : seeds) {
      const VertexId root = sets.find(s);
      if (std::find(roots.begin(), roots.end(), root) != roots.end()) continue;
      roots.push_back(root);
      reached += sets.size_of(root);
    }
    expected += probability * static_cast<double>(reached);
  });
  return expected;
}

std::vector<double> exact_singleton_influences(const Graph& g) {
  std::vector<double> expected(g.n(), 0.0);
  enumerate_worlds(g, [&](DisjointSets& sets, double probability) {
    for (VertexId v = 0; v < g.n(); ++v) expected[v] += probability * static_cast<double>(sets.size_of(v));
  });
  return expected;
}

}  // namespace infuser
