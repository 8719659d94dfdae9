#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace infuser {

using VertexId = std::uint32_t;
using EdgeSlot = std::uint64_t;

// Largest vertex count accepted; labels are signed 32-bit lanes.
inline constexpr std::uint64_t kMaxVertices = (std::uint64_t{1} << 31) - 1;

namespace weights {
struct Constant {
  double p;
  friend bool operator==(const Constant&, const Constant&) = default;
};
struct UniformRange {
  double lo;
  double hi;
  friend bool operator==(const UniformRange&, const UniformRange&) = default;
};
// Draws are clamped into [0,1].
struct Normal {
  double mean;
  double stddev;
  friend bool operator==(const Normal&, const Normal&) = default;
};
// w(u,v) = 1 / degree(v).
struct WeightedCascade {
  friend bool operator==(const WeightedCascade&, const WeightedCascade&) = default;
};
// Third column of the edge-list file.
struct FromFile {
  friend bool operator==(const FromFile&, const FromFile&) = default;
};
}  // namespace weights

using WeightScheme = std::variant<weights::Constant, weights::UniformRange, weights::Normal,
                                  weights::WeightedCascade, weights::FromFile>;

// Parses "const:P", "uniform:LO,HI", "normal:MEAN,STD", "wc" or "file".
WeightScheme parse_weight_scheme(std::string_view text);
std::string to_string(const WeightScheme& scheme);

// Undirected graph in CSR form. Every undirected edge {u,v} occupies two
// slots, (u,v) in u's row and (v,u) in v's row. Rows are sorted ascending.
// Immutable once built.
class Graph {
 public:
  Graph() = default;

  // Takes ownership of CSR arrays and checks every structural invariant
  // (offsets, ID range, sorted rows, reciprocal slots, weight range).
  // `original_ids` may be empty, meaning identity.
  Graph(std::vector<std::uint64_t> xadj, std::vector<VertexId> adj, std::vector<double> weights,
        std::vector<std::uint64_t> original_ids = {});

  std::size_t n() const noexcept { return xadj_.empty() ? 0 : xadj_.size() - 1; }
  std::size_t m() const noexcept { return adj_.size(); }
  std::size_t undirected_edge_count() const noexcept { return adj_.size() / 2; }

  std::span<const std::uint64_t> xadj() const noexcept { return xadj_; }
  std::span<const VertexId> adj() const noexcept { return adj_; }
  std::span<const double> weights() const noexcept { return weights_; }

  EdgeSlot slot_begin(VertexId v) const noexcept { return xadj_[v]; }
  EdgeSlot slot_end(VertexId v) const noexcept { return xadj_[v + 1]; }
  std::size_t degree(VertexId v) const noexcept { return xadj_[v + 1] - xadj_[v]; }
  std::span<const VertexId> neighbors(VertexId v) const noexcept {
    return {adj_.data() + xadj_[v], degree(v)};
  }
  VertexId target(EdgeSlot slot) const noexcept { return adj_[slot]; }
  double weight(EdgeSlot slot) const noexcept { return weights_[slot]; }

  // Source vertex of a slot, O(log n).
  VertexId source(EdgeSlot slot) const;
  std::optional<EdgeSlot> find_slot(VertexId u, VertexId v) const;
  // Slot (v,u) for slot (u,v), O(log d).
  EdgeSlot reverse_slot(EdgeSlot slot) const;

  // Inclusion probability of the undirected edge behind `slot`: the mean of
  // both directed weights. Equals weight(slot) whenever weights are symmetric.
  double undirected_weight(EdgeSlot slot) const;
  bool weights_symmetric() const noexcept { return weights_symmetric_; }

  std::uint64_t original_id(VertexId v) const noexcept {
    return original_ids_.empty() ? v : original_ids_[v];
  }
  std::optional<VertexId> compact_id(std::uint64_t original) const;

  // Per-slot weights read from the third edge-list column, if every line had one.
  const std::optional<std::vector<double>>& file_weights() const noexcept { return file_weights_; }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.xadj_ == b.xadj_ && a.adj_ == b.adj_ && a.weights_ == b.weights_;
  }

 private:
  friend Graph parse_edge_list(std::istream& in, bool directed_input);
  friend Graph apply_weights(const Graph& g, const WeightScheme& scheme, std::uint64_t rng_seed);

  void validate() const;
  void refresh_symmetry_flag();

  std::vector<std::uint64_t> xadj_;
  std::vector<VertexId> adj_;
  std::vector<double> weights_;
  std::vector<std::uint64_t> original_ids_;
  std::optional<std::vector<double>> file_weights_;
  bool weights_symmetric_ = true;
};

// Whitespace-separated "u v [w]" lines; '#' starts a comment line.
// Duplicates collapse (first weight wins), self-loops are dropped, and IDs are
// compacted in order of first appearance. Weights start at 0; the file column
// is kept aside for WeightScheme FromFile.
Graph parse_edge_list(std::istream& in, bool directed_input = false);
Graph load_edge_list(const std::filesystem::path& path, bool directed_input = false);

// Writes original IDs and current weights. Reloading the output (plus
// FromFile weights) reproduces the same CSR.
void write_edge_list(const Graph& g, std::ostream& out);

// Binary CSR cache: "INFCSR1\0", u64 n, u64 m, u64 xadj[n+1], u32 adj[m],
// f64 weights[m], all little-endian.
void write_csr_cache(const Graph& g, const std::filesystem::path& path);
Graph read_csr_cache(const std::filesystem::path& path);

// Dispatches on the cache magic, otherwise parses an edge list.
Graph load_graph(const std::filesystem::path& path, bool directed_input = false);

Graph apply_weights(const Graph& g, const WeightScheme& scheme, std::uint64_t rng_seed);

struct WeightedEdge {
  VertexId u;
  VertexId v;
  double w = 0.0;
};

// Builds a graph over vertices 0..n-1 from an undirected edge list (same
// dedup/self-loop rules as the loader). Weights come from the edges.
Graph make_graph(std::size_t n, std::span<const WeightedEdge> edges);

// Synthetic generators for tests and benchmarks.
Graph erdos_renyi(std::size_t n, double average_degree, std::uint64_t seed);
Graph rmat(unsigned scale, std::size_t edge_factor, std::uint64_t seed);

}  // namespace infuser
