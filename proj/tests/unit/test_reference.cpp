#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "infuser/error.hpp"
#include "infuser/reference.hpp"
#include "infuser/seed_selection.hpp"

using namespace infuser;
using namespace infuser::testing;

namespace {

TEST(SampleExplicit, AllOrNothingWeights) {
  const Graph full = triangle(1.0), none = triangle(0.0);
  const SimulationRandoms randoms(8, 3);
  const auto t_full = build_hash_table(full), t_none = build_hash_table(none);
  for (std::size_t r = 0; r < 8; ++r) {
    EXPECT_EQ(sample_explicit(full, t_full, randoms, r).undirected_edge_count(), 3u);
    EXPECT_EQ(sample_explicit(none, t_none, randoms, r).undirected_edge_count(), 0u);
  }
}

TEST(SampleExplicit, EqualsPerSlotRecomputationAndIsSymmetric) {
  const Graph g = apply_weights(graph_from_text("0 1\n1 2\n2 3\n3 4\n4 0\n0 2\n"), weights::UniformRange{0, 1}, 2);
  const auto table = build_hash_table(g);
  const SimulationRandoms randoms(16, 8);
  for (std::size_t r = 0; r < 16; ++r) {
    const auto sub = sample_explicit(g, table, randoms, r);
    for (EdgeSlot s = 0; s < g.m(); ++s) {
      EXPECT_EQ(sub.contains(s), sample_prob(table.hash(s), randoms[r]) < table.threshold(s));
      EXPECT_EQ(sub.contains(s), sub.contains(g.reverse_slot(s)));
    }
  }
  EXPECT_THROW(sample_explicit(g, table, randoms, 16), ConstraintError);
}

TEST(SampleRng, AllOrNothingWeights) {
  std::mt19937 rng(1);
  EXPECT_EQ(sample_rng(triangle(1.0), rng).undirected_edge_count(), 3u);
  EXPECT_EQ(sample_rng(triangle(0.0), rng).undirected_edge_count(), 0u);
}

TEST(SampleRng, InclusionFrequency) {
  const Graph g = make_graph(2, std::vector<WeightedEdge>{{0, 1, 0.3}});
  std::mt19937 rng(4);
  SampledSubgraph sub(g);
  int hits = 0;
  for (int i = 0; i < 100000; ++i) {
    sample_rng_into(rng, sub);
    EXPECT_EQ(sub.contains(0), sub.contains(1));
    hits += sub.contains(0);
  }
  EXPECT_NEAR(hits / 100000.0, 0.3, 0.005);
}

TEST(Reachability, Basics) {
  const Graph g = path_graph(5, 1.0);
  SampledSubgraph empty(g), full(g);
  for (EdgeSlot s = 0; s < g.m(); ++s) full.set_edge(s, true);
  EXPECT_EQ(reachability(empty, std::vector<VertexId>{2}), (std::vector<VertexId>{2}));
  EXPECT_EQ(reachability(full, std::vector<VertexId>{2}), (std::vector<VertexId>{0, 1, 2, 3, 4}));
  SampledSubgraph cut = full;
  cut.set_edge(*g.find_slot(2, 3), false);
  EXPECT_EQ(reachability(cut, std::vector<VertexId>{4}), (std::vector<VertexId>{3, 4}));
  EXPECT_EQ(reachability(cut, std::vector<VertexId>{0, 4}), (std::vector<VertexId>{0, 1, 2, 3, 4}));
}

// Two-branch toy where only {0,1} and {1,2} survive.
TEST(Reachability, HandTracedToy) {
  const Graph g = with_const(graph_from_text("0 1\n1 2\n0 3\n3 4\n"), 0.5);
  SampledSubgraph sub(g);
  sub.set_edge(*g.find_slot(0, 1), true);
  sub.set_edge(*g.find_slot(1, 2), true);
  EXPECT_EQ(reachability(sub, std::vector<VertexId>{0}), (std::vector<VertexId>{0, 1, 2}));
  EXPECT_EQ(reachability(sub, std::vector<VertexId>{3}), (std::vector<VertexId>{3}));
  EXPECT_EQ(sub.undirected_edge_count(), 2u);
}

TEST(NewGreedy, Examples) {
  RngSampler rng(1);
  EXPECT_EQ(new_greedy(edgeless(4), 1, 8, rng).seeds, (std::vector<VertexId>{0}));
  const Graph path = path_graph(6, 1.0);
  const auto res = new_greedy(path, 2, 8, rng);
  EXPECT_EQ(res.seeds[0], 0u);
  EXPECT_EQ(res.gains[res.seeds[1]], 0);
  EXPECT_THROW(new_greedy(path, 7, 8, rng), ConstraintError);
}

TEST(NewGreedy, FirstSeedMatchesFusedPipeline) {
  const Graph g = two_squares(0.5);
  const auto table = build_hash_table(g);
  const SimulationRandoms randoms(64, 3);
  HashSampler sampler(table, randoms);
  EXPECT_EQ(new_greedy(g, 1, 64, sampler).seeds.front(), run_infuser(g, 1, 64, 3).selection.seeds.front());
}

TEST(RandCas, Examples) {
  RngSampler rng(2);
  const Graph g = with_const(erdos_renyi(30, 3, 1), 0.2);
  std::vector<VertexId> all(g.n());
  std::iota(all.begin(), all.end(), 0);
  EXPECT_DOUBLE_EQ(rand_cas(g, all, 50, rng), 30.0);
  EXPECT_DOUBLE_EQ(rand_cas(edgeless(1), std::vector<VertexId>{0}, 10, rng), 1.0);
  EXPECT_THROW(rand_cas(g, std::vector<VertexId>{}, 10, rng), ConstraintError);

  const Graph k2 = make_graph(2, std::vector<WeightedEdge>{{0, 1, 0.3}});
  const double est = rand_cas(k2, std::vector<VertexId>{0}, 100000, rng);
  EXPECT_NEAR(est, 1.3, 3.0 * std::sqrt(0.3 * 0.7 / 100000.0));
}

TEST(MixGreedy, Examples) {
  RngSampler rng(3);
  EXPECT_EQ(mix_greedy(edgeless(5), 3, 8, rng).seeds, (std::vector<VertexId>{0, 1, 2}));
  EXPECT_EQ(mix_greedy(triangle(1.0), 1, 8, rng).seeds, (std::vector<VertexId>{0}));
  EXPECT_THROW(mix_greedy(triangle(1.0), 4, 8, rng), ConstraintError);
}

TEST(MixGreedy, StopCallbackEndsEarly) {
  const Graph g = edgeless(6);
  RngSampler rng(3);
  int polls = 0;
  const auto res = mix_greedy(g, 4, 8, rng, [&] { return ++polls > 1; });
  EXPECT_FALSE(res.completed);
  EXPECT_LT(res.seeds.size(), 4u);
  EXPECT_TRUE(mix_greedy(g, 4, 8, rng).completed);
}

TEST(MixGreedy, EqualsFusedSelectionOnSharedSamples) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = random_graph(rng, 10, 3, kSchemes[trial % 4]);
    const std::uint64_t seed = rng();
    const auto table = build_hash_table(g);
    const SimulationRandoms randoms(32, seed);
    HashSampler sampler(table, randoms);
    const auto ref = mix_greedy(g, 4, 32, sampler);
    const auto fused = run_infuser(g, 4, 32, seed).selection;
    EXPECT_EQ(ref.seeds, fused.seeds) << "trial " << trial;
    EXPECT_EQ(static_cast<std::uint64_t>(ref.sigma), fused.sigma);
  }
}

TEST(ExactInfluence, ClosedForms) {
  EXPECT_DOUBLE_EQ(exact_influence(edgeless(3), std::vector<VertexId>{1}), 1.0);
  const Graph k2 = make_graph(2, std::vector<WeightedEdge>{{0, 1, 0.3}});
  EXPECT_NEAR(exact_influence(k2, std::vector<VertexId>{0}), 1.3, 1e-12);
  EXPECT_NEAR(exact_influence(path_graph(3, 0.5), std::vector<VertexId>{0}), 1.75, 1e-12);
  EXPECT_NEAR(exact_influence(path_graph(3, 0.3), std::vector<VertexId>{0}), 1 + 0.3 + 0.09, 1e-12);
  EXPECT_NEAR(exact_influence(path_graph(3, 0.3), std::vector<VertexId>{0, 2}), 2 + 1 - 0.7 * 0.7, 1e-12);
  // Triangle: 1 + P(reach 1) + P(reach 2), each 1 - (1-p)(1-p^2).
  const double p = 0.4, reach = 1 - (1 - p) * (1 - p * p);
  EXPECT_NEAR(exact_influence(triangle(p), std::vector<VertexId>{0}), 1 + 2 * reach, 1e-12);
}

TEST(ExactInfluence, SingletonsAgreeWithPerSeedCalls) {
  std::mt19937_64 rng(6);
  const Graph g = random_graph(rng, 9, 3, "uniform:0,1");
  const auto all = exact_singleton_influences(g);
  for (VertexId v = 0; v < g.n(); ++v) EXPECT_NEAR(all[v], exact_influence(g, std::vector<VertexId>{v}), 1e-12);
}

TEST(ExactInfluence, TooManyEdges) {
  EXPECT_THROW(exact_influence(path_graph(kMaxExactEdges + 2, 0.5), std::vector<VertexId>{0}), ConstraintError);
  EXPECT_NO_THROW(exact_influence(path_graph(kMaxExactEdges + 1, 0.5), std::vector<VertexId>{0}));
}

TEST(RandCas, ConvergesToExactOnTinyFixtures) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 6; ++trial) {
    const Graph g = random_graph(rng, 8, 3, kSchemes[trial % 4]);
    RngSampler sampler(static_cast<std::uint32_t>(rng()));
    const std::vector<VertexId> seeds{static_cast<VertexId>(trial % 8)};
    const double exact = exact_influence(g, seeds);
    const double est = rand_cas(g, seeds, 40000, sampler);
    // Reach size is bounded by n, so variance <= n^2 / 4.
    EXPECT_NEAR(est, exact, 3.0 * (8.0 / 2.0) / std::sqrt(40000.0)) << "trial " << trial;
  }
}

// Storing an edge as (u,v) or (v,u) in the input does not matter.
TEST(Reachability, InvariantUnderInputDirection) {
  const Graph a = with_const(graph_from_text("0 1\n1 2\n2 3\n3 0\n1 3\n"), 0.5);
  // Reversed lines; the self-loop lines pin the ID order.
  const Graph c = with_const(graph_from_text("0 0\n1 1\n2 2\n3 3\n1 0\n2 1\n3 2\n0 3\n3 1\n"), 0.5);
  EXPECT_EQ(a, c);
  const auto table_a = build_hash_table(a), table_c = build_hash_table(c);
  const SimulationRandoms randoms(32, 2);
  for (std::size_t r = 0; r < 32; ++r) {
    const auto sa = sample_explicit(a, table_a, randoms, r), sc = sample_explicit(c, table_c, randoms, r);
    for (VertexId v = 0; v < 4; ++v) {
      EXPECT_EQ(reachability(sa, std::vector<VertexId>{v}), reachability(sc, std::vector<VertexId>{v}));
    }
  }
}

}  // namespace
