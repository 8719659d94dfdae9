#include "infuser/graph.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <unordered_map>

#include "infuser/error.hpp"

namespace infuser {

namespace {

constexpr char kCacheMagic[8] = {'I', 'N', 'F', 'C', 'S', 'R', '1', '\0'};

bool in_unit_interval(double x) { return x >= 0.0 && x <= 1.0; }

std::vector<double> parse_numbers(std::string_view body, std::string_view what) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    std::size_t comma = body.find(',', pos);
    if (comma == std::string_view::npos) comma = body.size();
    std::string_view token = body.substr(pos, comma - pos);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size()) {
      throw ConstraintError("bad number in weight scheme '" + std::string(what) + "'");
    }
    values.push_back(value);
    pos = comma + 1;
  }
  return values;
}

// Directed entry used while collapsing duplicates.
struct PendingSlot {
  VertexId u;
  VertexId v;
  double w;
  std::uint64_t order;
  bool explicit_line;
};

struct CsrArrays {
  std::vector<std::uint64_t> xadj;
  std::vector<VertexId> adj;
  std::vector<double> weights;
};

// Sorts, dedups (explicit entries first, then earliest line) and packs.
CsrArrays pack_slots(std::size_t n, std::vector<PendingSlot>& slots) {
  std::sort(slots.begin(), slots.end(), [](const PendingSlot& a, const PendingSlot& b) {
    if (a.u != b.u) return a.u < b.u;
    if (a.v != b.v) return a.v < b.v;
    if (a.explicit_line != b.explicit_line) return a.explicit_line;
    return a.order < b.order;
  });
  CsrArrays csr;
  csr.xadj.assign(n + 1, 0);
  csr.adj.reserve(slots.size());
  csr.weights.reserve(slots.size());
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (i > 0 && slots[i].u == slots[i - 1].u && slots[i].v == slots[i - 1].v) continue;
    csr.adj.push_back(slots[i].v);
    csr.weights.push_back(slots[i].w);
    ++csr.xadj[slots[i].u + 1];
  }
  std::partial_sum(csr.xadj.begin(), csr.xadj.end(), csr.xadj.begin());
  return csr;
}

template <typename T>
void write_le(std::ostream& out, const T* data, std::size_t count) {
  static_assert(std::endian::native == std::endian::little, "big-endian hosts are not supported");
  out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(sizeof(T) * count));
}

template <typename T>
void read_le(std::istream& in, T* data, std::size_t count) {
  in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(sizeof(T) * count));
  if (!in) throw IoError("truncated CSR cache");
}

}  // namespace

WeightScheme parse_weight_scheme(std::string_view text) {
  auto colon = text.find(':');
  std::string_view kind = text.substr(0, colon);
  std::string_view body = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);

  auto expect = [&](std::size_t count) {
    auto values = parse_numbers(body, text);
    if (values.size() != count) {
      throw ConstraintError("weight scheme '" + std::string(text) + "' expects " +
                            std::to_string(count) + " parameter(s)");
    }
    return values;
  };

  WeightScheme scheme;
  if (kind == "const") {
    scheme = weights::Constant{expect(1)[0]};
  } else if (kind == "uniform") {
    auto v = expect(2);
    scheme = weights::UniformRange{v[0], v[1]};
  } else if (kind == "normal") {
    auto v = expect(2);
    scheme = weights::Normal{v[0], v[1]};
  } else if (kind == "wc" && body.empty()) {
    scheme = weights::WeightedCascade{};
  } else if (kind == "file" && body.empty()) {
    scheme = weights::FromFile{};
  } else {
    throw ConstraintError("unknown weight scheme '" + std::string(text) + "'");
  }
  return scheme;
}

std::string to_string(const WeightScheme& scheme) {
  std::ostringstream os;
  os.precision(17);
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, weights::Constant>) {
          os << "const:" << s.p;
        } else if constexpr (std::is_same_v<S, weights::UniformRange>) {
          os << "uniform:" << s.lo << ',' << s.hi;
        } else if constexpr (std::is_same_v<S, weights::Normal>) {
          os << "normal:" << s.mean << ',' << s.stddev;
        } else if constexpr (std::is_same_v<S, weights::WeightedCascade>) {
          os << "wc";
        } else {
          os << "file";
        }
      },
      scheme);
  return os.str();
}

Graph::Graph(std::vector<std::uint64_t> xadj, std::vector<VertexId> adj, std::vector<double> weights,
             std::vector<std::uint64_t> original_ids)
    : xadj_(std::move(xadj)),
      adj_(std::move(adj)),
      weights_(std::move(weights)),
      original_ids_(std::move(original_ids)) {
  validate();
  refresh_symmetry_flag();
}

void Graph::validate() const {
  if (xadj_.empty()) throw ConstraintError("graph has no vertices");
  const std::size_t nv = n();
  if (nv > kMaxVertices) throw ConstraintError("graph has 2^31 or more vertices");
  if (xadj_.front() != 0 || xadj_.back() != adj_.size()) throw ConstraintError("CSR offsets do not span adj");
  if (weights_.size() != adj_.size()) throw ConstraintError("weights not aligned with adj");
  if (!original_ids_.empty() && original_ids_.size() != nv) throw ConstraintError("original id table size mismatch");
  for (std::size_t v = 0; v < nv; ++v) {
    if (xadj_[v] > xadj_[v + 1]) throw ConstraintError("CSR offsets decrease");
    for (EdgeSlot s = xadj_[v]; s < xadj_[v + 1]; ++s) {
      if (adj_[s] >= nv) throw ConstraintError("neighbor ID out of range");
      if (adj_[s] == v) throw ConstraintError("self-loop in CSR");
      if (s > xadj_[v] && adj_[s - 1] >= adj_[s]) throw ConstraintError("row not strictly ascending");
      if (!in_unit_interval(weights_[s])) throw ConstraintError("weight outside [0,1]");
    }
  }
  for (std::size_t v = 0; v < nv; ++v) {
    for (EdgeSlot s = xadj_[v]; s < xadj_[v + 1]; ++s) {
      if (!find_slot(adj_[s], static_cast<VertexId>(v))) throw ConstraintError("missing reciprocal slot");
    }
  }
}

void Graph::refresh_symmetry_flag() {
  weights_symmetric_ = true;
  for (std::size_t v = 0; v < n() && weights_symmetric_; ++v) {
    for (EdgeSlot s = xadj_[v]; s < xadj_[v + 1]; ++s) {
      if (adj_[s] > v && weights_[s] != weights_[reverse_slot(s)]) {
        weights_symmetric_ = false;
        break;
      }
    }
  }
}

VertexId Graph::source(EdgeSlot slot) const {
  auto it = std::upper_bound(xadj_.begin(), xadj_.end(), slot);
  return static_cast<VertexId>(std::distance(xadj_.begin(), it) - 1);
}

std::optional<EdgeSlot> Graph::find_slot(VertexId u, VertexId v) const {
  auto row = neighbors(u);
  auto it = std::lower_bound(row.begin(), row.end(), v);
  if (it == row.end() || *it != v) return std::nullopt;
  return xadj_[u] + static_cast<EdgeSlot>(it - row.begin());
}

EdgeSlot Graph::reverse_slot(EdgeSlot slot) const {
  auto reverse = find_slot(adj_[slot], source(slot));
  return *reverse;
}

double Graph::undirected_weight(EdgeSlot slot) const {
  if (weights_symmetric_) return weights_[slot];
  return 0.5 * (weights_[slot] + weights_[reverse_slot(slot)]);
}

std::optional<VertexId> Graph::compact_id(std::uint64_t original) const {
  if (original_ids_.empty()) {
    if (original < n()) return static_cast<VertexId>(original);
    return std::nullopt;
  }
  auto it = std::find(original_ids_.begin(), original_ids_.end(), original);
  if (it == original_ids_.end()) return std::nullopt;
  return static_cast<VertexId>(it - original_ids_.begin());
}

Graph parse_edge_list(std::istream& in, bool directed_input) {
  std::unordered_map<std::uint64_t, VertexId> compact;
  std::vector<std::uint64_t> original_ids;
  std::vector<PendingSlot> slots;
  bool all_weighted = true;
  std::uint64_t order = 0;

  auto intern = [&](std::uint64_t id) {
    auto [it, inserted] = compact.try_emplace(id, static_cast<VertexId>(original_ids.size()));
    if (inserted) {
      if (original_ids.size() >= kMaxVertices) throw ConstraintError("graph has 2^31 or more vertices");
      original_ids.push_back(id);
    }
    return it->second;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view rest(line);
    auto skip_ws = [&] {
      while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.front()))) rest.remove_prefix(1);
    };
    auto next_token = [&]() -> std::string_view {
      skip_ws();
      std::size_t len = 0;
      while (len < rest.size() && !std::isspace(static_cast<unsigned char>(rest[len]))) ++len;
      auto token = rest.substr(0, len);
      rest.remove_prefix(len);
      return token;
    };
    skip_ws();
    if (rest.empty() || rest.front() == '#') continue;

    std::uint64_t ids[2];
    for (auto& id : ids) {
      auto token = next_token();
      auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), id);
      if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size()) {
        throw ParseError("expected two non-negative vertex IDs", line_no);
      }
    }
    double w = 0.0;
    bool has_weight = false;
    if (auto token = next_token(); !token.empty()) {
      auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), w);
      if (ec != std::errc{} || ptr != token.data() + token.size() || !std::isfinite(w)) {
        throw ParseError("bad weight '" + std::string(token) + "'", line_no);
      }
      has_weight = true;
    }
    if (!next_token().empty()) throw ParseError("too many columns", line_no);
    all_weighted = all_weighted && has_weight;

    VertexId u = intern(ids[0]);
    VertexId v = intern(ids[1]);
    if (u == v) continue;
    slots.push_back({u, v, w, order, true});
    slots.push_back({v, u, w, order, !directed_input});
    ++order;
  }
  if (original_ids.empty()) throw IoError("empty graph: no edges found");

  const std::size_t n = original_ids.size();
  CsrArrays csr = pack_slots(n, slots);

  Graph g;
  g.xadj_ = std::move(csr.xadj);
  g.adj_ = std::move(csr.adj);
  g.weights_.assign(g.adj_.size(), 0.0);
  g.original_ids_ = std::move(original_ids);
  if (all_weighted && !g.adj_.empty()) g.file_weights_ = std::move(csr.weights);
  return g;
}

Graph load_edge_list(const std::filesystem::path& path, bool directed_input) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_edge_list(in, directed_input);
}

void write_edge_list(const Graph& g, std::ostream& out) {
  const auto precision = out.precision(17);
  out << "# n=" << g.n() << " undirected_edges=" << g.undirected_edge_count() << '\n';
  // One self-loop per vertex first: dropped on reload, but it pins the
  // first-appearance order so compaction reproduces the same IDs.
  for (VertexId v = 0; v < g.n(); ++v) out << g.original_id(v) << ' ' << g.original_id(v) << " 0\n";
  for (VertexId u = 0; u < g.n(); ++u) {
    for (EdgeSlot s = g.slot_begin(u); s < g.slot_end(u); ++s) {
      VertexId v = g.target(s);
      if (g.weights_symmetric() && v < u) continue;
      out << g.original_id(u) << ' ' << g.original_id(v) << ' ' << g.weight(s) << '\n';
    }
  }
  out.precision(precision);
}

void write_csr_cache(const Graph& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  const std::uint64_t header[2] = {g.n(), g.m()};
  out.write(kCacheMagic, sizeof(kCacheMagic));
  write_le(out, header, 2);
  write_le(out, g.xadj().data(), g.xadj().size());
  write_le(out, g.adj().data(), g.adj().size());
  write_le(out, g.weights().data(), g.weights().size());
  if (!out) throw IoError("failed writing " + path.string());
}

Graph read_csr_cache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kCacheMagic, sizeof(magic)) != 0) throw IoError("not a CSR cache: " + path.string());
  std::uint64_t header[2];
  read_le(in, header, 2);
  if (header[0] == 0) throw IoError("empty graph in CSR cache");
  if (header[0] > kMaxVertices) throw ConstraintError("graph has 2^31 or more vertices");
  std::vector<std::uint64_t> xadj(header[0] + 1);
  std::vector<VertexId> adj(header[1]);
  std::vector<double> weights(header[1]);
  read_le(in, xadj.data(), xadj.size());
  read_le(in, adj.data(), adj.size());
  read_le(in, weights.data(), weights.size());
  try {
    return Graph(std::move(xadj), std::move(adj), std::move(weights));
  } catch (const ConstraintError& e) {
    throw IoError("corrupt CSR cache " + path.string() + ": " + e.what());
  }
}

Graph load_graph(const std::filesystem::path& path, bool directed_input) {
  {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw IoError("cannot open " + path.string());
    char magic[8] = {};
    probe.read(magic, sizeof(magic));
    if (probe && std::memcmp(magic, kCacheMagic, sizeof(magic)) == 0) return read_csr_cache(path);
  }
  return load_edge_list(path, directed_input);
}

Graph apply_weights(const Graph& g, const WeightScheme& scheme, std::uint64_t rng_seed) {
  Graph out = g;
  std::mt19937_64 rng(rng_seed);

  // One value per undirected edge, visited in (u ascending, slot ascending)
  // order over canonical slots u < v, mirrored onto the reverse slot.
  auto assign_symmetric = [&](auto&& draw) {
    for (VertexId u = 0; u < out.n(); ++u) {
      for (EdgeSlot s = out.slot_begin(u); s < out.slot_end(u); ++s) {
        if (out.target(s) < u) continue;
        const double w = draw();
        out.weights_[s] = w;
        out.weights_[out.reverse_slot(s)] = w;
      }
    }
  };

  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, weights::Constant>) {
          if (!in_unit_interval(s.p)) throw ConstraintError("constant weight outside [0,1]");
          std::fill(out.weights_.begin(), out.weights_.end(), s.p);
        } else if constexpr (std::is_same_v<S, weights::UniformRange>) {
          if (!in_unit_interval(s.lo) || !in_unit_interval(s.hi) || s.lo > s.hi) {
            throw ConstraintError("uniform weight range must satisfy 0 <= lo <= hi <= 1");
          }
          if (s.lo == s.hi) {
            std::fill(out.weights_.begin(), out.weights_.end(), s.lo);
          } else {
            std::uniform_real_distribution<double> dist(s.lo, s.hi);
            assign_symmetric([&] { return std::min(dist(rng), s.hi); });
          }
        } else if constexpr (std::is_same_v<S, weights::Normal>) {
          if (!in_unit_interval(s.mean) || !in_unit_interval(s.stddev)) {
            throw ConstraintError("normal weight parameters must lie in [0,1]");
          }
          if (s.stddev == 0.0) {
            std::fill(out.weights_.begin(), out.weights_.end(), s.mean);
          } else {
            std::normal_distribution<double> dist(s.mean, s.stddev);
            assign_symmetric([&] { return std::clamp(dist(rng), 0.0, 1.0); });
          }
        } else if constexpr (std::is_same_v<S, weights::WeightedCascade>) {
          for (EdgeSlot slot = 0; slot < out.m(); ++slot) {
            out.weights_[slot] = 1.0 / static_cast<double>(out.degree(out.target(slot)));
          }
        } else {
          if (!g.file_weights_) throw ConstraintError("graph was not loaded with a weight column");
          for (double w : *g.file_weights_) {
            if (!in_unit_interval(w)) throw ConstraintError("file weight outside [0,1]");
          }
          out.weights_ = *g.file_weights_;
        }
      },
      scheme);
  out.refresh_symmetry_flag();
  return out;
}

Graph make_graph(std::size_t n, std::span<const WeightedEdge> edges) {
  if (n == 0) throw ConstraintError("graph has no vertices");
  if (n > kMaxVertices) throw ConstraintError("graph has 2^31 or more vertices");
  std::vector<PendingSlot> slots;
  slots.reserve(edges.size() * 2);
  std::uint64_t order = 0;
  for (const auto& e : edges) {
    if (e.u >= n || e.v >= n) throw ConstraintError("edge endpoint out of range");
    if (e.u == e.v) continue;
    slots.push_back({e.u, e.v, e.w, order, true});
    slots.push_back({e.v, e.u, e.w, order, true});
    ++order;
  }
  CsrArrays csr = pack_slots(n, slots);
  return Graph(std::move(csr.xadj), std::move(csr.adj), std::move(csr.weights));
}

}  // namespace infuser
