#include <gtest/gtest.h>

#include <numeric>
#include <omp.h>

#include "fixtures.hpp"
#include "infuser/propagation.hpp"

using namespace infuser;
using namespace infuser::testing;

namespace {

struct Fused {
  EdgeHashTable table;
  SimulationRandoms randoms;
  LabelMatrix labels;
  PropagationStats stats;
};

Fused run(const Graph& g, std::size_t sims, std::uint64_t seed) {
  Fused f{build_hash_table(g), SimulationRandoms(sims, seed), {}, {}};
  f.labels = propagate(g, f.table, f.randoms, &f.stats);
  return f;
}

TEST(Propagate, EdgelessKeepsIdentityLabels) {
  const Graph g = edgeless(5);
  const Fused f = run(g, 16, 1);
  for (VertexId v = 0; v < 5; ++v) {
    for (std::size_t r = 0; r < 16; ++r) EXPECT_EQ(f.labels.at(v, r), static_cast<Label>(v));
  }
  EXPECT_EQ(f.stats.sweeps, 1u);
}

TEST(Propagate, FullTriangleCollapsesToZero) {
  const Fused f = run(triangle(1.0), kLanes, 2);
  for (VertexId v = 0; v < 3; ++v) {
    for (std::size_t r = 0; r < kLanes; ++r) EXPECT_EQ(f.labels.at(v, r), 0);
  }
}

TEST(Propagate, PaddedLanesPropagateButAreNotScored) {
  const Fused f = run(triangle(1.0), 3, 2);
  EXPECT_EQ(f.labels.simulations(), 3u);
  EXPECT_EQ(f.labels.stride(), 8u);
  EXPECT_EQ(f.labels.at(2, 7), 0);
  const auto sizes = component_sizes(f.labels);
  EXPECT_EQ(initial_marginal_gains(f.labels, sizes), (std::vector<std::uint64_t>{9, 9, 9}));
}

// u = 0 pushes into v = 1 across a K2 edge present in lanes 0 and 2 only.
TEST(LaneLabelStep, UpdatesOnlySampledSmallerLanes) {
  const Graph g = make_graph(2, std::vector<WeightedEdge>{{0, 1, 0.5}});
  const EdgeHashTable table = build_hash_table(g);
  const std::uint32_t in = table.hash(0), out = table.hash(0) ^ kHashMax;
  const auto randoms = SimulationRandoms::from_values({in, out, in, out, out, out, out, out});
  LabelMatrix labels(2, 8);
  EXPECT_EQ(lane_label_step(0, 1, 0, 0, labels, table, randoms), 0b101);
  for (std::size_t r = 0; r < 8; ++r) {
    EXPECT_EQ(labels.at(1, r), (r == 0 || r == 2) ? 0 : 1) << r;
    EXPECT_EQ(labels.at(0, r), 0);
  }
  // Equal labels now: nothing changes.
  EXPECT_EQ(lane_label_step(0, 1, 0, 0, labels, table, randoms), 0);
  // Pushing the larger label back never raises anything.
  EXPECT_EQ(lane_label_step(1, 0, 1, 0, labels, table, randoms), 0);
}

TEST(LaneLabelStep, AbsentEdgeChangesNothing) {
  const Graph g = make_graph(2, std::vector<WeightedEdge>{{0, 1, 0.0}});
  const EdgeHashTable table = build_hash_table(g);
  const SimulationRandoms randoms(8, 3);
  LabelMatrix labels(2, 8);
  EXPECT_EQ(lane_label_step(0, 1, 0, 0, labels, table, randoms), 0);
  EXPECT_EQ(labels, LabelMatrix(2, 8));
}

TEST(Propagate, MatchesExplicitBfsOnToyGraph) {
  // Two triangles joined through vertex 2, plus a pendant.
  const Graph g = with_const(graph_from_text("0 1\n1 2\n2 0\n2 3\n3 4\n4 2\n4 5\n"), 0.5);
  const Fused f = run(g, 64, 7);
  for (std::size_t r = 0; r < 64; ++r) {
    const auto expected = bfs_components(sample_explicit(g, f.table, f.randoms, r));
    for (VertexId v = 0; v < g.n(); ++v) EXPECT_EQ(f.labels.at(v, r), expected[v]) << "v=" << v << " r=" << r;
  }
}

TEST(ComponentSizes, EdgelessAndTriangle) {
  const Fused e = run(edgeless(4), 8, 1);
  const auto es = component_sizes(e.labels);
  for (Label v = 0; v < 4; ++v) {
    for (std::size_t r = 0; r < 8; ++r) EXPECT_EQ(es.at(v, r), 1u);
  }
  EXPECT_EQ(initial_marginal_gains(e.labels, es), (std::vector<std::uint64_t>(4, 8)));

  const Fused t = run(triangle(1.0), 8, 1);
  const auto ts = component_sizes(t.labels);
  for (std::size_t r = 0; r < 8; ++r) {
    EXPECT_EQ(ts.at(0, r), 3u);
    EXPECT_EQ(ts.at(1, r), 0u);
    EXPECT_EQ(ts.at(2, r), 0u);
  }
  EXPECT_EQ(initial_marginal_gains(t.labels, ts), (std::vector<std::uint64_t>(3, 24)));
}

TEST(ComponentSizes, MatchBfsCountsAndColumnsSumToN) {
  std::mt19937_64 rng(12);
  const Graph g = random_graph(rng, 300, 4, "const:0.3");
  const Fused f = run(g, 40, 5);
  const auto sizes = component_sizes(f.labels);
  for (std::size_t r = 0; r < 40; ++r) {
    const auto comp = bfs_components(sample_explicit(g, f.table, f.randoms, r));
    std::vector<std::uint32_t> counts(g.n(), 0);
    for (Label l : comp) ++counts[static_cast<std::size_t>(l)];
    std::uint64_t column = 0;
    for (Label l = 0; l < static_cast<Label>(g.n()); ++l) {
      EXPECT_EQ(sizes.at(l, r), counts[static_cast<std::size_t>(l)]);
      column += sizes.at(l, r);
    }
    EXPECT_EQ(column, g.n());
  }
}

// Component of the center: 1 + Binomial(4, 0.5), variance 1.
TEST(InitialGains, StarCenterMatchesClosedForm) {
  const Graph g = star(4, 0.5);
  const Fused f = run(g, 10000, 21);
  const auto mg = initial_marginal_gains(f.labels, component_sizes(f.labels));
  const double mean = static_cast<double>(mg[0]) / 10000.0;
  EXPECT_NEAR(mean, 3.0, 3.0 * 1.0 / std::sqrt(10000.0));
}

TEST(Propagate, ThreadCountDoesNotChangeFixpoint) {
  std::mt19937_64 rng(8);
  const Graph g = random_graph(rng, 2000, 6, "uniform:0,0.4");
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const Fused one = run(g, 32, 3);
  omp_set_num_threads(4);
  const Fused four = run(g, 32, 3);
  omp_set_num_threads(saved);
  EXPECT_EQ(one.labels, four.labels);
}

TEST(LabelDump, RoundTrip) {
  TempDir dir;
  const Fused f = run(with_const(erdos_renyi(100, 4, 1), 0.3), 16, 2);
  const auto path = dir.file("labels.bin");
  write_label_matrix(f.labels, path);
  const LabelMatrix back = read_label_matrix(path);
  ASSERT_EQ(back.n(), f.labels.n());
  ASSERT_EQ(back.stride(), f.labels.stride());
  EXPECT_TRUE(std::equal(back.data().begin(), back.data().end(), f.labels.data().begin()));
  EXPECT_EQ(std::filesystem::file_size(path), 16 + 100 * 16 * 4u);
}

}  // namespace
