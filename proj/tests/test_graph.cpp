#include "npcd/graph.hpp"

#include <gtest/gtest.h>

#include <set>

#include "npcd/errors.hpp"
#include "oracles.hpp"

namespace npcd {
namespace {

Matrix two_node(double a) {
  Matrix m = Matrix::Zero(2, 2);
  m(1, 0) = a;
  return m;
}

TEST(WeightedDagTest, RejectsNonzeroDiagonal) {
  Matrix m = Matrix::Zero(3, 3);
  m(1, 1) = 1.0;
  EXPECT_THROW(WeightedDag{m}, ValidationError);
}

TEST(WeightedDagTest, RejectsCycle) {
  Matrix m = Matrix::Zero(3, 3);
  m(1, 0) = 1.0;
  m(2, 1) = 1.0;
  m(0, 2) = 1.0;
  EXPECT_THROW(WeightedDag{m}, ValidationError);
}

TEST(WeightedDagTest, RejectsNonSquareAndNonFinite) {
  EXPECT_THROW(WeightedDag{Matrix::Zero(2, 3)}, ValidationError);
  Matrix m = Matrix::Zero(2, 2);
  m(1, 0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(WeightedDag{m}, ValidationError);
}

TEST(WeightedDagTest, EdgeConvention) {
  const WeightedDag dag(two_node(2.5));
  EXPECT_TRUE(dag.has_edge(0, 1));
  EXPECT_FALSE(dag.has_edge(1, 0));
  EXPECT_EQ(dag.weight(1, 0), 2.5);
  EXPECT_EQ(dag.parents(1), std::vector<int>{0});
}

TEST(SupportOfTest, TwoNodeEdgeIsSymmetric) {
  const auto chi = support_of(WeightedDag(two_node(3.0)));
  EXPECT_TRUE(chi.edge(0, 1));
  EXPECT_TRUE(chi.edge(1, 0));
}

TEST(SupportOfTest, EmptyGraph) {
  EXPECT_EQ(support_of(WeightedDag::empty(4)), SupportMatrix(4));
}

TEST(SupportOfTest, FiveNodeChainFragment) {
  // edges 2 -> 1 and 3 -> 2 in 1-based labels
  Matrix m = Matrix::Zero(5, 5);
  m(0, 1) = 1.0;
  m(1, 2) = -2.0;
  const auto chi = support_of(WeightedDag(m));
  EXPECT_EQ(chi.edge_count(), 2);
  EXPECT_TRUE(chi.edge(0, 1) && chi.edge(1, 0) && chi.edge(1, 2) && chi.edge(2, 1));
}

TEST(SupportOfTest, TransposeInvariant) {
  Rng rng(11);
  for (int t = 0; t < 50; ++t) {
    PriorSpec spec;
    spec.relabel = false;
    const auto dag = sample_prior(spec, rng);
    EXPECT_EQ(support_of(dag), support_of(WeightedDag(dag.weights().transpose())));
  }
}

TEST(SupportMatrixTest, FromEntriesValidates) {
  EXPECT_THROW(SupportMatrix::from_entries({{0, 1}, {0, 0}}), ValidationError);
  EXPECT_THROW(SupportMatrix::from_entries({{1, 0}, {0, 0}}), ValidationError);
  EXPECT_THROW(SupportMatrix::from_entries({{0, 2}, {2, 0}}), ValidationError);
  EXPECT_EQ(SupportMatrix::from_entries({{0, 1}, {1, 0}}).edge_count(), 1);
}

TEST(TopologicalOrderTest, Chain) {
  Matrix m = Matrix::Zero(3, 3);
  m(1, 0) = 1.0;
  m(2, 1) = 1.0;
  EXPECT_EQ(topological_order(WeightedDag(m)), (std::vector<int>{0, 1, 2}));
}

TEST(TopologicalOrderTest, EmptyGraphIsIdentity) {
  EXPECT_EQ(topological_order(WeightedDag::empty(4)), (std::vector<int>{0, 1, 2, 3}));
}

TEST(TopologicalOrderTest, RelabeledSampleBecomesLowerTriangular) {
  Rng rng(5);
  PriorSpec spec;
  spec.d = 6;
  for (int t = 0; t < 100; ++t) {
    const auto dag = sample_prior(spec, rng);
    const auto order = topological_order(dag);
    std::vector<int> position(dag.size());
    for (int k = 0; k < dag.size(); ++k) position[order[k]] = k;
    const auto reordered = permute(dag, position);
    EXPECT_TRUE(reordered.weights().triangularView<Eigen::Upper>().toDenseMatrix().isZero());
  }
}

TEST(SamplePriorTest, LowerTriangularBeforeRelabel) {
  Rng rng(3);
  PriorSpec spec;
  spec.relabel = false;
  for (int t = 0; t < 100; ++t) {
    const auto dag = sample_prior(spec, rng);
    EXPECT_TRUE(dag.weights().triangularView<Eigen::Upper>().toDenseMatrix().isZero());
    for (int i = 0; i < dag.size(); ++i)
      for (int j = 0; j < dag.size(); ++j) {
        const double a = std::abs(dag.weights()(i, j));
        if (a != 0.0) {
          EXPECT_GE(a, 0.5);
          EXPECT_LE(a, 5.0);
        }
      }
  }
}

TEST(SamplePriorTest, EdgeFrequencyMatchesKeepProbability) {
  Rng rng(2024);
  PriorSpec spec;
  spec.relabel = false;
  int kept = 0, slots = 0;
  for (int t = 0; t < 10000; ++t) {
    kept += sample_prior(spec, rng).edge_count();
    slots += 10;
  }
  EXPECT_NEAR(static_cast<double>(kept) / slots, 0.5, 0.02);
}

TEST(SamplePriorTest, RejectsEdgeProbOne) {
  PriorSpec spec;
  spec.edge_prob = 1.0;
  Rng rng(1);
  EXPECT_THROW(sample_prior(spec, rng), ValidationError);
}

TEST(SamplePriorTest, TwoNodeFiniteSupportGivesThreeStructures) {
  PriorSpec spec;
  spec.d = 2;
  spec.weight_law = FiniteSupport{{1.0}, {}};
  Rng rng(9);
  std::set<std::pair<double, double>> seen;
  for (int t = 0; t < 500; ++t) {
    const auto dag = sample_prior(spec, rng);
    seen.emplace(dag.weights()(1, 0), dag.weights()(0, 1));
  }
  EXPECT_EQ(seen, (std::set<std::pair<double, double>>{{0, 0}, {1, 0}, {0, 1}}));
}

TEST(SamplePriorTest, RelabelingMakesPairMarginalsEqual) {
  PriorSpec spec;
  spec.d = 4;
  Rng rng(77);
  const int trials = 20000;
  std::vector<int> hits(16, 0);
  for (int t = 0; t < trials; ++t) {
    const auto chi = support_of(sample_prior(spec, rng));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (i != j) hits[i * 4 + j] += chi.edge(i, j);
  }
  // Each pair is present with probability 0.5 after relabeling.
  const double se = std::sqrt(0.25 / trials);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j) EXPECT_NEAR(hits[i * 4 + j] / static_cast<double>(trials), 0.5, 3.0 * se);
}

TEST(EnumerateDagsTest, CountsMatchBruteForce) {
  for (int d = 1; d <= 4; ++d) {
    EXPECT_EQ(static_cast<long>(enumerate_dags(d, {1.0}).size()), oracle::count_dags(d)) << d;
  }
}

TEST(EnumerateDagsTest, KnownCounts) {
  EXPECT_EQ(enumerate_dags(1, {1.0}).size(), 1u);
  EXPECT_EQ(enumerate_dags(2, {1.0}).size(), 3u);
  EXPECT_EQ(enumerate_dags(3, {1.0}).size(), 25u);
  EXPECT_EQ(enumerate_dags(4, {1.0}).size(), 543u);
}

TEST(EnumerateDagsTest, NoDuplicatesWithTwoWeights) {
  const auto dags = enumerate_dags(3, {1.0, -2.0});
  std::set<std::vector<double>> seen;
  for (const auto& g : dags)
    seen.insert(std::vector<double>(g.weights().data(), g.weights().data() + 9));
  EXPECT_EQ(seen.size(), dags.size());
}

TEST(EnumerateDagsTest, CapacityError) {
  EXPECT_THROW(enumerate_dags(5, {1.0}), CapacityError);
  EXPECT_NO_THROW(enumerate_dags(2, {1.0}, 2));
}

TEST(PermuteTest, RoundTrip) {
  Rng rng(4);
  PriorSpec spec;
  const auto dag = sample_prior(spec, rng);
  const auto perm = random_permutation(spec.d, rng);
  std::vector<int> inverse(spec.d);
  for (int k = 0; k < spec.d; ++k) inverse[perm[k]] = k;
  EXPECT_EQ(permute(permute(dag, perm), inverse), dag);
}

}  // namespace
}  // namespace npcd
