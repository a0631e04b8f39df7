#include <gtest/gtest.h>

#include <set>

#include "cnbt/graph.hpp"
#include "support/random_graphs.hpp"

using namespace cnbt;

TEST(DirectedGraph, RejectsSelfLoop) {
  EXPECT_THROW(DirectedGraph(3, {{1, 1}}), InvalidInput);
}

TEST(DirectedGraph, RejectsDuplicateEdge) {
  EXPECT_THROW(DirectedGraph(3, {{0, 1}, {1, 2}, {0, 1}}), InvalidInput);
}

TEST(DirectedGraph, RejectsOutOfRangeEndpoint) {
  EXPECT_THROW(DirectedGraph(2, {{0, 2}}), InvalidInput);
  EXPECT_THROW(DirectedGraph(2, {{-1, 0}}), InvalidInput);
}

TEST(DirectedGraph, EmptyGraph) {
  const DirectedGraph g(5, {});
  EXPECT_EQ(g.num_vertices(), 5);
  EXPECT_EQ(g.num_edges(), 0u);
  EXPECT_EQ(g.num_unoriented_edges(), 0u);
  EXPECT_TRUE(g.neighbors(3).empty());
}

TEST(DirectedGraph, EdgesSortedAndAdjacencyConsistent) {
  const DirectedGraph g(4, {{3, 1}, {0, 2}, {1, 0}, {0, 1}});
  ASSERT_EQ(g.num_edges(), 4u);
  EXPECT_TRUE(std::is_sorted(g.edges().begin(), g.edges().end()));
  EXPECT_TRUE(g.has_edge(3, 1));
  EXPECT_FALSE(g.has_edge(1, 3));
  EXPECT_TRUE(g.adjacent(1, 3));
  EXPECT_EQ(g.num_unoriented_edges(), 3u);  // {0,1} counted once
  EXPECT_EQ(std::vector<Vertex>(g.neighbors(1).begin(), g.neighbors(1).end()), (std::vector<Vertex>{0, 3}));
}

TEST(ClassifyPair, AllKinds) {
  const DirectedGraph g = cnbt::testing::worked_example_graph();
  EXPECT_EQ(classify_pair(g, 0, 1), PairKind::Bidirected);
  EXPECT_EQ(classify_pair(g, 1, 0), PairKind::Bidirected);
  EXPECT_EQ(classify_pair(g, 0, 2), PairKind::Forward);
  EXPECT_EQ(classify_pair(g, 2, 0), PairKind::Backward);
  EXPECT_EQ(classify_pair(g, 0, 3), PairKind::NonAdjacent);
  EXPECT_THROW(classify_pair(g, 2, 2), InvalidInput);
  EXPECT_THROW(classify_pair(g, 0, 7), InvalidInput);
}

TEST(ClassifyPair, ForwardBackwardAntisymmetry) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const DirectedGraph g = cnbt::testing::random_digraph(9, 0.4, seed);
    for (Vertex u = 0; u < 9; ++u) {
      for (Vertex v = 0; v < 9; ++v) {
        if (u == v) continue;
        const PairKind a = classify_pair(g, u, v), b = classify_pair(g, v, u);
        if (a == PairKind::Forward) EXPECT_EQ(b, PairKind::Backward);
        if (a == PairKind::Bidirected) EXPECT_EQ(b, PairKind::Bidirected);
        if (a == PairKind::NonAdjacent) EXPECT_EQ(b, PairKind::NonAdjacent);
      }
    }
  }
}

TEST(StepRotation, Values) {
  EXPECT_EQ(step_rotation(PairKind::Forward), 1);
  EXPECT_EQ(step_rotation(PairKind::Backward), -1);
  EXPECT_EQ(step_rotation(PairKind::Bidirected), 0);
  EXPECT_THROW(step_rotation(PairKind::NonAdjacent), InvalidInput);
}

TEST(OrientedEdgeIndex, WorkedExampleOrder) {
  const OrientedEdgeIndex idx(cnbt::testing::worked_example_graph());
  ASSERT_EQ(idx.m(), 5u);
  const std::vector<Edge> expected = {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3},
                                      {1, 0}, {2, 0}, {2, 1}, {3, 1}, {3, 2}};
  EXPECT_EQ(std::vector<Edge>(idx.edges().begin(), idx.edges().end()), expected);
  EXPECT_EQ(idx.index_of(3, 1), 8u);
  EXPECT_THROW(idx.index_of(0, 3), InvalidInput);
}

TEST(OrientedEdgeIndex, ReverseInvolutionAndIncidence) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const DirectedGraph g = cnbt::testing::random_digraph(10, 0.35, seed);
    const OrientedEdgeIndex idx(g);
    EXPECT_EQ(idx.size(), 2 * g.num_unoriented_edges());
    for (std::size_t e = 0; e < idx.size(); ++e) {
      EXPECT_EQ(idx.reverse_of(idx.reverse_of(e)), e);
      EXPECT_EQ(idx[idx.reverse_of(e)], idx[e].reversed());
      EXPECT_EQ(idx.index_of(idx[e].from, idx[e].to), e);
    }
    for (Vertex u = 0; u < g.num_vertices(); ++u) {
      EXPECT_EQ(idx.outgoing(u).size(), g.neighbors(u).size());
      EXPECT_EQ(idx.incoming(u).size(), g.neighbors(u).size());
    }
  }
}

TEST(NeighborhoodProfile, DegreesPartitionNeighbourhood) {
  const DirectedGraph g = cnbt::testing::worked_example_graph();
  const NeighborhoodProfile p(g);
  EXPECT_EQ(p.degree, (std::vector<int>{2, 3, 3, 2}));
  for (Vertex u = 0; u < 4; ++u) EXPECT_EQ(p.in_degree[u] + p.out_degree[u] + p.bi_degree[u], p.degree[u]);
  EXPECT_EQ(p.bi[0], (std::vector<Vertex>{1}));
  EXPECT_EQ(p.out[1], (std::vector<Vertex>{2}));
  EXPECT_EQ(p.in[1], (std::vector<Vertex>{3}));
}

TEST(OrientedEdgeIndex, SingleEdge) {
  const OrientedEdgeIndex idx(DirectedGraph(2, {{0, 1}}));
  ASSERT_EQ(idx.size(), 2u);
  EXPECT_EQ(idx[0], (Edge{0, 1}));
  EXPECT_EQ(idx[1], (Edge{1, 0}));
}
