#include <gtest/gtest.h>

#include "cnbt/clustering.hpp"
#include "cnbt/metrics.hpp"
#include "cnbt/sbm.hpp"
#include "support/oracles.hpp"
#include "support/random_graphs.hpp"

using namespace cnbt;

namespace {

SbmSample planted(int K, Vertex n, double c, double eps, double eta, std::uint64_t seed) {
  SparseSbmParams p;
  p.K = K;
  p.n = n;
  p.c = c;
  p.epsilon = eps;
  p.eta = eta;
  return sparse_sbm_sample(p, SparseModel::Dsbm, seed);
}

}  // namespace

TEST(Methods, ParseRoundTrip) {
  for (Method m : kAllMethods) EXPECT_EQ(parse_method(to_string(m)), m);
  EXPECT_FALSE(parse_method("bogus").has_value());
}

TEST(Features, RowNormalizationAndZeroRows) {
  Eigen::MatrixXcd X(3, 2);
  X << Complex(3, 0), Complex(0, 4), Complex(0, 0), Complex(0, 0), Complex(1, 1), Complex(0, 0);
  const FeatureMatrix f = make_features(X);
  EXPECT_EQ(f.zero_rows, 1);
  EXPECT_NEAR(f.X_tilde.row(0).norm(), 1.0, 1e-15);
  EXPECT_EQ(f.X_tilde.row(1).norm(), 0.0);
  ASSERT_EQ(f.X_real.cols(), 4);
  EXPECT_NEAR(f.X_real(0, 0), 0.6, 1e-15);
  EXPECT_NEAR(f.X_real(0, 3), 0.8, 1e-15);
}

TEST(CnbtSc, RejectsTooManyClustersAndEdgelessGraphs) {
  const DirectedGraph g = cnbt::testing::worked_example_graph();
  EXPECT_THROW(cnbt_sc(g, 5, NodeVariant::Out), InvalidInput);
  EXPECT_THROW(cnbt_sc(g, 1, NodeVariant::Out), InvalidInput);
  EXPECT_THROW(cnbt_sc(DirectedGraph(6, {}), 2, NodeVariant::Out), InvalidInput);
}

TEST(CnbtSc, UsesFloorHalfKEigenvectors) {
  const SbmSample s = planted(5, 200, 10, 8, 1, 3);
  const ClusteringRun run = cnbt_sc(s.graph, 5, NodeVariant::Out);
  EXPECT_EQ(run.eigenvalues.size(), 2u);
  EXPECT_GE(run.eigenvalues[0].real(), run.eigenvalues[1].real());
  EXPECT_EQ(run.labels.size(), 200u);
}

TEST(CnbtSc, ReducedAndDirectPathsSpanTheSameSpace) {
  const SbmSample s = planted(4, 120, 8, 6, 1, 5);
  ClusteringOptions reduced, direct;
  direct.path = EigenPath::Direct;
  const CnbtEmbedding a = cnbt_embedding(s.graph, 4, NodeVariant::Out, reduced);
  const CnbtEmbedding b = cnbt_embedding(s.graph, 4, NodeVariant::Out, direct);
  ASSERT_EQ(a.eigenvalues.size(), b.eigenvalues.size());
  for (std::size_t i = 0; i < a.eigenvalues.size(); ++i) EXPECT_NEAR(std::abs(a.eigenvalues[i] - b.eigenvalues[i]), 0.0, 1e-7);
  EXPECT_LE(cnbt::testing::max_principal_angle(a.features.X, b.features.X), 1e-6);
}

TEST(CnbtSc, RecoversStrongPlantedPartition) {
  const SbmSample s = planted(3, 300, 12, 10, 1, 8);
  const ClusteringRun out = cnbt_sc(s.graph, 3, NodeVariant::Out);
  const ClusteringRun in = cnbt_sc(s.graph, 3, NodeVariant::In);
  EXPECT_GE(ari(out.labels, s.labels), 0.8);
  EXPECT_GE(ari(in.labels, s.labels), 0.8);
}

TEST(CnbtSc, DeterministicForSeed) {
  const SbmSample s = planted(3, 150, 6, 4, 1, 2);
  ClusteringOptions opt;
  opt.seed = 99;
  EXPECT_EQ(cnbt_sc(s.graph, 3, NodeVariant::Out, opt).labels, cnbt_sc(s.graph, 3, NodeVariant::Out, opt).labels);
}

TEST(CnbtSc, AlphaOverride) {
  const SbmSample s = planted(3, 90, 8, 6, 1, 4);
  ClusteringOptions opt;
  opt.alpha_override = Complex(0, 1);
  EXPECT_NO_THROW(cnbt_sc(s.graph, 3, NodeVariant::Out, opt));
  opt.alpha_override = Complex(2, 0);
  EXPECT_THROW(cnbt_sc(s.graph, 3, NodeVariant::Out, opt), InvalidInput);
}

TEST(Baselines, AllRunAndBeatChanceOnStrongSignal) {
  const SbmSample s = planted(3, 300, 15, 20, 1, 1);
  for (Method m : {Method::Herm, Method::SimpleHerm, Method::DdSym, Method::DiSim}) {
    const ClusteringRun run = baseline_cluster(s.graph, 3, m);
    EXPECT_EQ(run.labels.size(), 300u) << to_string(m);
    EXPECT_GT(ari(run.labels, s.labels), 0.2) << to_string(m);
  }
}

TEST(Baselines, EdgelessGraphIsFlaggedDegenerate) {
  const ClusteringRun run = baseline_cluster(DirectedGraph(6, {}), 2, Method::Herm);
  EXPECT_TRUE(run.degenerate);
  EXPECT_EQ(run.labels.size(), 6u);
}

TEST(Baselines, RejectsCnbtMethodIds) {
  EXPECT_THROW(baseline_cluster(cnbt::testing::worked_example_graph(), 2, Method::CnbtOut), InvalidInput);
}

// Disconnected components should come out as the two clusters.
TEST(CnbtSc, SeparatesTwoDirectedTriangles) {
  const DirectedGraph g(6, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}});
  const std::vector<int> truth = {0, 0, 0, 1, 1, 1};
  EXPECT_DOUBLE_EQ(ari(cnbt_sc(g, 2, NodeVariant::Out).labels, truth), 1.0);
  EXPECT_DOUBLE_EQ(ari(cnbt_sc(g, 2, NodeVariant::In).labels, truth), 1.0);
}

TEST(CnbtSc, SingleBidirectedEdge) {
  const DirectedGraph g(2, {{0, 1}, {1, 0}});
  for (NodeVariant v : {NodeVariant::Out, NodeVariant::In}) {
    const ClusteringRun run = cnbt_sc(g, 2, v);
    ASSERT_EQ(run.labels.size(), 2u);
    for (int l : run.labels) EXPECT_TRUE(l == 0 || l == 1);
  }
}

TEST(CnbtSc, StrongCircularSignalOverTenSeeds) {
  double total = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SbmSample s = planted(3, 300, 12, 10, 1, 100 + seed);
    ClusteringOptions opt;
    opt.seed = seed;
    total += ari(cnbt_sc(s.graph, 3, NodeVariant::Out, opt).labels, s.labels);
  }
  EXPECT_GE(total / 10, 0.8);
}

TEST(Baselines, DdsymSplitsTwoBidirectedCliques) {
  std::vector<Edge> e;
  for (Vertex base : {0, 5})
    for (Vertex u = 0; u < 5; ++u)
      for (Vertex v = 0; v < 5; ++v)
        if (u != v) e.push_back({base + u, base + v});
  const DirectedGraph g(10, e);
  const std::vector<int> truth = {0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
  EXPECT_DOUBLE_EQ(ari(baseline_cluster(g, 2, Method::DdSym).labels, truth), 1.0);
}

TEST(Baselines, SimpleHermOnDenseTwoClusterModel) {
  Eigen::MatrixXd F(2, 2);
  F << 0.5, 0.95, 0.05, 0.5;  // cluster 0 -> cluster 1 dominates
  // At p = 2% the signal clears the bulk edge comfortably only from n ~ 1000.
  double total = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SbmSample s = dense_dsbm_sample(DenseDsbmParams{2, 1000, 0.02, 0.05, F}, seed);
    ClusteringOptions opt;
    opt.seed = seed;
    total += ari(baseline_cluster(s.graph, 2, Method::SimpleHerm, opt).labels, s.labels);
  }
  EXPECT_GE(total / 10, 0.8);
}
