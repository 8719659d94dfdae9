#include <random>
#include <vector>

#include "infuser/error.hpp"
#include "infuser/graph.hpp"

namespace infuser {

Graph erdos_renyi(std::size_t n, double average_degree, std::uint64_t seed) {
  if (n < 2) throw ConstraintError("erdos_renyi needs at least two vertices");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(n - 1));
  const auto target = static_cast<std::size_t>(average_degree * static_cast<double>(n) / 2.0);
  std::vector<WeightedEdge> edges;
  edges.reserve(target);
  for (std::size_t i = 0; i < target; ++i) edges.push_back({pick(rng), pick(rng), 0.0});
  return make_graph(n, edges);
}

Graph rmat(unsigned scale, std::size_t edge_factor, std::uint64_t seed) {
  if (scale == 0 || scale > 30) throw ConstraintError("rmat scale must be in [1,30]");
  constexpr double a = 0.57, b = 0.19, c = 0.19;
  const std::size_t n = std::size_t{1} << scale;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<WeightedEdge> edges;
  edges.reserve(n * edge_factor);
  for (std::size_t i = 0; i < n * edge_factor; ++i) {
    VertexId u = 0, v = 0;
    for (unsigned bit = 0; bit < scale; ++bit) {
      const double x = coin(rng);
      const VertexId ubit = x >= a + b ? 1 : 0;
      const VertexId vbit = (x >= a && x < a + b) || x >= a + b + c ? 1 : 0;
      u = (u << 1) | ubit;
      v = (v << 1) | vbit;
    }
    edges.push_back({u, v, 0.0});
  }
  return make_graph(n, edges);
}

}  // namespace infuser
