#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "infuser/edge_hash.hpp"
#include "infuser/graph.hpp"
#include "infuser/propagation.hpp"
#include "infuser/reference.hpp"

namespace infuser::testing {

inline Graph graph_from_text(const std::string& text, bool directed = false) {
  std::istringstream in(text);
  return parse_edge_list(in, directed);
}

inline Graph with_const(const Graph& g, double p) { return apply_weights(g, weights::Constant{p}, 1); }

inline Graph path_graph(std::size_t n, double p) {
  std::vector<WeightedEdge> edges;
  for (VertexId v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1, p});
  return make_graph(n, edges);
}

inline Graph triangle(double p) { return make_graph(3, std::vector<WeightedEdge>{{0, 1, p}, {1, 2, p}, {0, 2, p}}); }

// Two disjoint 4-cycles: 0-1-2-3 and 4-5-6-7.
inline Graph two_squares(double p) {
  std::vector<WeightedEdge> edges;
  for (VertexId base : {0u, 4u}) {
    for (VertexId i = 0; i < 4; ++i) edges.push_back({base + i, base + (i + 1) % 4, p});
  }
  return make_graph(8, edges);
}

inline Graph star(std::size_t leaves, double p) {
  std::vector<WeightedEdge> edges;
  for (VertexId v = 1; v <= leaves; ++v) edges.push_back({0, v, p});
  return make_graph(leaves + 1, edges);
}

inline Graph edgeless(std::size_t n) { return make_graph(n, std::span<const WeightedEdge>{}); }

inline const char* const kSchemes[] = {"const:0.3", "uniform:0,0.6", "normal:0.3,0.2", "wc"};

// Random simple graph with roughly n * avg_degree / 2 edges and the given scheme.
inline Graph random_graph(std::mt19937_64& rng, std::size_t n, double avg_degree, const std::string& scheme) {
  std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(n - 1));
  const auto target = static_cast<std::size_t>(static_cast<double>(n) * avg_degree / 2.0);
  std::vector<WeightedEdge> edges;
  for (std::size_t i = 0; i < target; ++i) edges.push_back({pick(rng), pick(rng), 0.0});
  return apply_weights(make_graph(n, edges), parse_weight_scheme(scheme), rng());
}

// Component labels (smallest member ID) of an explicit sample, by BFS.
inline std::vector<Label> bfs_components(const SampledSubgraph& sub) {
  const Graph& g = sub.parent();
  std::vector<Label> label(g.n(), -1);
  for (VertexId s = 0; s < g.n(); ++s) {
    if (label[s] >= 0) continue;
    for (VertexId v : reachability(sub, std::vector<VertexId>{s})) label[v] = static_cast<Label>(s);
  }
  return label;
}

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("infuser-test-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path file(const std::string& name, const std::string& contents = {}) const {
    auto p = path_ / name;
    if (!contents.empty()) std::ofstream(p) << contents;
    return p;
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace infuser::testing
