#include "infuser/propagation.hpp"

#include <atomic>
#include <bit>
#include <fstream>

#include <omp.h>

#include "infuser/error.hpp"
#include "lanes.hpp"

namespace infuser {

LabelMatrix::LabelMatrix(std::size_t n, std::size_t simulations)
    : n_(n), simulations_(simulations), stride_(round_up_to_lanes(simulations)), labels_(n * stride_) {
  if (n > kMaxVertices) throw ConstraintError("too many vertices for 32-bit labels");
  for (std::size_t v = 0; v < n; ++v) {
    std::fill_n(labels_.begin() + static_cast<std::ptrdiff_t>(v * stride_), stride_, static_cast<Label>(v));
  }
}

ComponentSizeTable::ComponentSizeTable(std::size_t n, std::size_t simulations, std::size_t stride)
    : n_(n), simulations_(simulations), stride_(stride), sizes_(n * stride, 0) {}

LaneMask lane_label_step(VertexId u, VertexId v, EdgeSlot slot, std::size_t r0, LabelMatrix& labels,
                         const EdgeHashTable& table, const SimulationRandoms& randoms) {
  const LaneMask select =
      detail::membership_mask(table.hash(slot), table.threshold(slot), randoms.values().data() + r0);
  if (select == 0) return 0;

  Label* from = labels.row(u).data() + r0;
  Label* to = labels.row(v).data() + r0;
  alignas(32) Label lu[kLanes];
  alignas(32) Label lv[kLanes];
  for (std::size_t b = 0; b < kLanes; ++b) {
    lu[b] = std::atomic_ref<Label>(from[b]).load(std::memory_order_relaxed);
    lv[b] = std::atomic_ref<Label>(to[b]).load(std::memory_order_relaxed);
  }

  unsigned pending = select & detail::smaller_mask(lu, lv);
  LaneMask changed = 0;
  while (pending != 0) {
    const int b = std::countr_zero(pending);
    pending &= pending - 1;
    std::atomic_ref<Label> target(to[b]);
    Label current = lv[b];
    while (lu[b] < current) {
      if (target.compare_exchange_weak(current, lu[b], std::memory_order_relaxed)) {
        changed |= static_cast<LaneMask>(1u << b);
        break;
      }
    }
  }
  return changed;
}

LabelMatrix propagate(const Graph& g, const EdgeHashTable& table, const SimulationRandoms& randoms,
                      PropagationStats* stats, const SweepObserver& observer) {
  if (table.size() != g.m()) throw ConstraintError("hash table does not match graph");
  const std::size_t n = g.n();
  const std::size_t stride = randoms.padded();
  LabelMatrix labels(n, randoms.simulations());

  std::vector<VertexId> frontier(n);
  for (std::size_t v = 0; v < n; ++v) frontier[v] = static_cast<VertexId>(v);
  std::vector<std::uint8_t> live(n, 0);

  PropagationStats local;
  while (!frontier.empty()) {
    ++local.sweeps;
    local.frontier_sizes.push_back(frontier.size());
    std::uint64_t visits = 0;

#pragma omp parallel for schedule(dynamic, 64) reduction(+ : visits)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(frontier.size()); ++i) {
      const VertexId u = frontier[static_cast<std::size_t>(i)];
      for (EdgeSlot s = g.slot_begin(u); s < g.slot_end(u); ++s) {
        if (table.threshold(s) == 0) continue;
        const VertexId v = g.target(s);
        ++visits;
        LaneMask any = 0;
        for (std::size_t r0 = 0; r0 < stride; r0 += kLanes) {
          any |= lane_label_step(u, v, s, r0, labels, table, randoms);
        }
        if (any != 0) std::atomic_ref<std::uint8_t>(live[v]).store(1, std::memory_order_relaxed);
      }
    }
    local.edge_visits += visits;

    frontier.clear();
    for (std::size_t v = 0; v < n; ++v) {
      if (live[v] != 0) {
        frontier.push_back(static_cast<VertexId>(v));
        live[v] = 0;
      }
    }
    if (observer) observer(local.sweeps, labels, frontier);
  }
  if (stats != nullptr) *stats = std::move(local);
  return labels;
}

ComponentSizeTable component_sizes(const LabelMatrix& labels) {
  const std::size_t n = labels.n();
  const std::size_t stride = labels.stride();
  ComponentSizeTable sizes(n, labels.simulations(), stride);
  // Each worker owns a contiguous block of batch columns, so counts need no
  // atomics; rows are walked in order within a block.
  const std::size_t batches = stride / kLanes;
#pragma omp parallel
  {
    const auto workers = static_cast<std::size_t>(omp_get_num_threads());
    const auto id = static_cast<std::size_t>(omp_get_thread_num());
    const std::size_t r0 = batches * id / workers * kLanes;
    const std::size_t r1 = batches * (id + 1) / workers * kLanes;
    for (std::size_t v = 0; v < n && r0 < r1; ++v) {
      const Label* row = labels.row(static_cast<VertexId>(v)).data();
      for (std::size_t r = r0; r < r1; ++r) ++sizes.at(row[r], r);
    }
  }
  return sizes;
}

std::vector<std::uint64_t> initial_marginal_gains(const LabelMatrix& labels, const ComponentSizeTable& sizes) {
  const std::size_t n = labels.n();
  const std::size_t simulations = labels.simulations();
  std::vector<std::uint64_t> gains(n, 0);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
    const auto v = static_cast<VertexId>(i);
    std::uint64_t sum = 0;
    for (std::size_t r = 0; r < simulations; ++r) sum += sizes.at(labels.at(v, r), r);
    gains[v] = sum;
  }
  return gains;
}

void write_label_matrix(const LabelMatrix& labels, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  const std::uint64_t header[2] = {labels.n(), labels.stride()};
  out.write(reinterpret_cast<const char*>(header), sizeof(header));
  out.write(reinterpret_cast<const char*>(labels.data().data()),
            static_cast<std::streamsize>(labels.data().size() * sizeof(Label)));
  if (!out) throw IoError("failed writing " + path.string());
}

LabelMatrix read_label_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::uint64_t header[2];
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  if (!in || header[1] % kLanes != 0 || header[1] == 0) throw IoError("bad label matrix header");
  LabelMatrix labels(header[0], header[1]);
  for (std::size_t v = 0; v < header[0]; ++v) {
    auto row = labels.row(static_cast<VertexId>(v));
    in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(row.size() * sizeof(Label)));
  }
  if (!in) throw IoError("truncated label matrix");
  return labels;
}

}  // namespace infuser
