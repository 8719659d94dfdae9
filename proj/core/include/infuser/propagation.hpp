#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include "infuser/edge_hash.hpp"
#include "infuser/graph.hpp"

namespace infuser {

using Label = std::int32_t;

// n x stride matrix of component labels; the stride (R rounded up to
// kLanes) labels of one vertex are contiguous. Starts as labels[v][r] = v.
class LabelMatrix {
 public:
  LabelMatrix() = default;
  LabelMatrix(std::size_t n, std::size_t simulations);

  std::size_t n() const noexcept { return n_; }
  // Scored simulations (R); lanes in [simulations(), stride()) are padding.
  std::size_t simulations() const noexcept { return simulations_; }
  std::size_t stride() const noexcept { return stride_; }

  Label at(VertexId v, std::size_t r) const noexcept { return labels_[v * stride_ + r]; }
  Label& at(VertexId v, std::size_t r) noexcept { return labels_[v * stride_ + r]; }
  std::span<const Label> row(VertexId v) const noexcept { return {labels_.data() + v * stride_, stride_}; }
  std::span<Label> row(VertexId v) noexcept { return {labels_.data() + v * stride_, stride_}; }
  std::span<const Label> data() const noexcept { return labels_; }

  friend bool operator==(const LabelMatrix&, const LabelMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t simulations_ = 0;
  std::size_t stride_ = 0;
  std::vector<Label> labels_;
};

// sizes[label][r] = |{v : labels[v][r] == label}|; zero for labels that do
// not survive in simulation r.
class ComponentSizeTable {
 public:
  ComponentSizeTable() = default;
  ComponentSizeTable(std::size_t n, std::size_t simulations, std::size_t stride);

  std::size_t n() const noexcept { return n_; }
  std::size_t simulations() const noexcept { return simulations_; }
  std::size_t stride() const noexcept { return stride_; }

  std::uint32_t at(Label label, std::size_t r) const noexcept {
    return sizes_[static_cast<std::size_t>(label) * stride_ + r];
  }
  std::uint32_t& at(Label label, std::size_t r) noexcept {
    return sizes_[static_cast<std::size_t>(label) * stride_ + r];
  }

 private:
  std::size_t n_ = 0;
  std::size_t simulations_ = 0;
  std::size_t stride_ = 0;
  std::vector<std::uint32_t> sizes_;
};

struct PropagationStats {
  std::size_t sweeps = 0;
  std::uint64_t edge_visits = 0;
  std::vector<std::size_t> frontier_sizes;
};

// Called after every sweep with the labels and the frontier for the next one.
using SweepObserver =
    std::function<void(std::size_t sweep, const LabelMatrix& labels, std::span<const VertexId> next_frontier)>;

// Fused batched min-label propagation over randoms.simulations() implicit
// samples. At the fixpoint, labels[v][r] is the smallest vertex ID in v's
// connected component of sample r. Push-based over a live-vertex frontier,
// parallel over frontier vertices with per-lane atomic min updates.
LabelMatrix propagate(const Graph& g, const EdgeHashTable& table, const SimulationRandoms& randoms,
                      PropagationStats* stats = nullptr, const SweepObserver& observer = {});

// Pushes u's labels across slot (u,v) for lanes [r0, r0 + kLanes): each lane
// sampled for this edge takes min(l_u, l_v). Returns the lanes of v that
// changed. Safe to call concurrently on shared labels.
LaneMask lane_label_step(VertexId u, VertexId v, EdgeSlot slot, std::size_t r0, LabelMatrix& labels,
                         const EdgeHashTable& table, const SimulationRandoms& randoms);

ComponentSizeTable component_sizes(const LabelMatrix& labels);

// mg[v] = sum over scored r of sizes[labels[v][r]][r]. Integer sums; divide
// by R only for reporting.
std::vector<std::uint64_t> initial_marginal_gains(const LabelMatrix& labels, const ComponentSizeTable& sizes);

// Debug dump: u64 n, u64 stride, then row-major i32 labels (little-endian).
void write_label_matrix(const LabelMatrix& labels, const std::filesystem::path& path);
// All stride lanes are treated as scored.
LabelMatrix read_label_matrix(const std::filesystem::path& path);

}  // namespace infuser
