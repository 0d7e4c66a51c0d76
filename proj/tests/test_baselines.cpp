#include "npcd/baselines.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "npcd/errors.hpp"
#include "npcd/rng.hpp"
#include "oracles.hpp"

namespace npcd {
namespace {

WeightedDag a1(double a) {
  Matrix m = Matrix::Zero(2, 2);
  m(1, 0) = a;
  return WeightedDag(m);
}

PriorSpec prior(int d) {
  PriorSpec s;
  s.d = d;
  return s;
}

// Best total residual sum over every DAG structure, by direct regression.
double brute_force_rss(const Dataset& data, int skip_i = -1, int skip_j = -1) {
  const int d = data.dim();
  double best = std::numeric_limits<double>::infinity();
  for (const auto& dag : enumerate_dags(d, {1.0}, d)) {
    if (skip_i >= 0 && (dag.has_edge(skip_i, skip_j) || dag.has_edge(skip_j, skip_i))) continue;
    double total = 0.0;
    for (int v = 0; v < d; ++v) {
      const auto parents = dag.parents(v);
      const Vector y = data.column(v);
      total += parents.empty() ? y.squaredNorm()
                               : oracle::normal_equations_rss(select_columns(data, parents), y);
    }
    best = std::min(best, total);
  }
  return best;
}

TEST(LogLikelihoodTest, EmptyGraphClosedForm) {
  Rng rng(1);
  const auto data = simulate(WeightedDag::empty(3), 20, 2.0, rng);
  const Matrix s = empirical_covariance(data);
  const double expected = -0.5 * 20 * 3 * std::log(2 * std::numbers::pi * 2.0) - 20.0 / 4.0 * s.trace();
  EXPECT_NEAR(dag_log_likelihood(WeightedDag::empty(3), s, 20, 2.0), expected, 1e-10);
}

TEST(LogLikelihoodTest, InvariantUnderRelabeling) {
  Rng rng(2);
  for (int t = 0; t < 20; ++t) {
    const auto dag = sample_prior(prior(4), rng);
    const auto data = simulate(dag, 15, 1.0, rng);
    const auto perm = random_permutation(4, rng);
    Matrix x(15, 4);
    for (int v = 0; v < 4; ++v) x.col(perm[v]) = data.column(v);
    const double a = dag_log_likelihood(dag, empirical_covariance(data), 15, 1.0);
    const double b = dag_log_likelihood(permute(dag, perm), empirical_covariance(Dataset(x, 1.0)), 15, 1.0);
    EXPECT_NEAR(a, b, 1e-9 * std::abs(a));
  }
}

TEST(LogLikelihoodTest, FittedOrderingIsLocalMaximum) {
  Rng rng(3);
  const auto data = simulate(sample_prior(prior(4), rng), 30, 1.0, rng);
  const std::vector<int> order{2, 0, 3, 1};
  const auto fit = fit_ordering(data, order);
  const Matrix s = empirical_covariance(data);
  const double best = dag_log_likelihood(fit, s, 30, 1.0);
  std::normal_distribution<double> z(0.0, 0.05);
  for (int t = 0; t < 100; ++t) {
    Matrix a = fit.weights();
    for (Eigen::Index k = 0; k < a.size(); ++k)
      if (a(k) != 0.0) a(k) += z(rng);
    EXPECT_LE(dag_log_likelihood(WeightedDag(a), s, 30, 1.0), best + 1e-9);
  }
}

TEST(OrderingSearchTest, MatchesStructureEnumeration) {
  Rng rng(4);
  for (int t = 0; t < 10; ++t) {
    const auto data = simulate(sample_prior(prior(3), rng), 12, 1.0, rng);
    const auto search = search_orderings(data);
    EXPECT_NEAR(search.best_rss, brute_force_rss(data), 1e-9);
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        EXPECT_NEAR(search.constrained_rss(i, j), brute_force_rss(data, i, j), 1e-9);
  }
}

TEST(OrderingSearchTest, ParallelMatchesSerial) {
  Rng rng(5);
  const auto data = simulate(sample_prior(prior(6), rng), 25, 1.0, rng);
  const auto a = search_orderings(data), b = search_orderings_serial(data);
  EXPECT_EQ(a.best_order, b.best_order);
  EXPECT_EQ(a.best_rss, b.best_rss);
  EXPECT_EQ(a.constrained_rss, b.constrained_rss);
}

TEST(OrderingSearchTest, CapacityLimit) {
  Rng rng(6);
  const auto data = simulate(WeightedDag::empty(8), 10, 1.0, rng);
  EXPECT_THROW(search_orderings(data), CapacityError);
}

TEST(GlrtTest, StatisticsNonnegativeAndSymmetric) {
  Rng rng(7);
  for (int t = 0; t < 20; ++t) {
    const auto lambda = glrt_statistics(simulate(sample_prior(prior(4), rng), 10, 1.0, rng));
    EXPECT_TRUE(lambda.isApprox(lambda.transpose()));
    EXPECT_GE(lambda.minCoeff(), 0.0);
    EXPECT_EQ(lambda.diagonal().cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(GlrtTest, RelabelingPermutesStatistics) {
  Rng rng(8);
  const auto data = simulate(sample_prior(prior(4), rng), 10, 1.0, rng);
  const auto perm = random_permutation(4, rng);
  Matrix x(10, 4);
  for (int v = 0; v < 4; ++v) x.col(perm[v]) = data.column(v);
  const Matrix a = glrt_statistics(data), b = glrt_statistics(Dataset(x, 1.0));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_NEAR(a(i, j), b(perm[i], perm[j]), 1e-8);
}

TEST(GlrtTest, MonteCarloThresholdControlsFalsePositives) {
  GlrtConfig cfg;
  cfg.epsilon = 0.1;
  cfg.null_samples = 2000;
  cfg.seed = 9;
  const double tau = glrt_threshold(cfg, 3, 10);
  Rng rng(10);
  int fp = 0, total = 0;
  for (int t = 0; t < 2000; ++t) {
    const auto r = glrt_detect(simulate(WeightedDag::empty(3), 10, 1.0, rng), cfg, tau);
    fp += r.support.edge_count();
    total += 3;
  }
  const double rate = static_cast<double>(fp) / total;
  // Pairs within a dataset are dependent; the binomial error is widened by 3x.
  EXPECT_NEAR(rate, 0.1, 3.0 * 3.0 * std::sqrt(0.09 / total));
}

TEST(GlrtTest, ChiSquaredThresholdIsQuantile) {
  GlrtConfig cfg;
  cfg.mode = GlrtThresholdMode::kChiSquared;
  cfg.epsilon = 0.05;
  EXPECT_NEAR(glrt_threshold(cfg, 3, 10), 3.841458820694124, 1e-9);
}

TEST(GlrtTest, ThresholdDeterministicInSeed) {
  GlrtConfig cfg;
  cfg.null_samples = 200;
  cfg.seed = 11;
  cfg.null_model = prior(3);
  EXPECT_EQ(glrt_threshold(cfg, 3, 8), glrt_threshold(cfg, 3, 8));
  cfg.null_model = prior(4);
  EXPECT_THROW(glrt_threshold(cfg, 3, 8), ValidationError);
}

TEST(LassoTest, LambdaMaxZeroesEverything) {
  Rng rng(12);
  for (int t = 0; t < 200; ++t) {
    const auto data = simulate(sample_prior(prior(5), rng), 7 + t % 40, 1.0, rng);
    const double lmax = lasso_lambda_max(data);
    EXPECT_EQ(lasso_coefficients(data, lmax).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_GT(lasso_coefficients(data, 0.99 * lmax).cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(LassoTest, ZeroPenaltyIsDense) {
  Rng rng(13);
  const auto data = simulate(sample_prior(prior(5), rng), 40, 1.0, rng);
  EXPECT_EQ(lasso_neighborhood(data, 0.0).edge_count(), 10);
}

TEST(LassoTest, AgreesWithFista) {
  Rng rng(14);
  std::normal_distribution<double> z;
  for (int t = 0; t < 5; ++t) {
    Matrix x(30, 6);
    for (Eigen::Index k = 0; k < x.size(); ++k) x(k) = z(rng);
    Vector y = x.col(0) * 1.5 - x.col(3) * 0.7;
    for (Eigen::Index k = 0; k < y.size(); ++k) y(k) += z(rng);
    const double lambda = 0.1;
    const auto fit = lasso_coordinate_descent(x, y, lambda);
    ASSERT_TRUE(fit.converged);
    const double ref = lasso_objective(x, y, oracle::lasso_fista(x, y, lambda), lambda);
    EXPECT_NEAR(fit.objective, ref, 1e-6);
  }
}

TEST(LassoTest, SatisfiesKkt) {
  Rng rng(15);
  const auto data = simulate(sample_prior(prior(5), rng), 50, 1.0, rng);
  const double lambda = 0.3 * lasso_lambda_max(data);
  const Matrix b = lasso_coefficients(data, lambda, 1e-12);
  for (int i = 0; i < 5; ++i) {
    std::vector<int> rest;
    for (int k = 0; k < 5; ++k)
      if (k != i) rest.push_back(k);
    const Matrix zm = select_columns(data, rest);
    Vector coef(4);
    for (int k = 0; k < 4; ++k) coef(k) = b(i, rest[k]);
    const Vector grad = zm.transpose() * (data.column(i) - zm * coef) / 50.0;
    for (int k = 0; k < 4; ++k) {
      if (coef(k) != 0.0) EXPECT_NEAR(grad(k), lambda * (coef(k) > 0 ? 1.0 : -1.0), 1e-6);
      else EXPECT_LE(std::abs(grad(k)), lambda + 1e-6);
    }
  }
}

TEST(LassoTest, RejectsNegativePenalty) {
  EXPECT_THROW(lasso_coordinate_descent(Matrix::Ones(3, 1), Vector::Ones(3), -1.0), ValidationError);
}

TEST(DirectionTest, EmptySupportGivesZeroMatrix) {
  Rng rng(16);
  const auto data = simulate(sample_prior(prior(4), rng), 20, 1.0, rng);
  EXPECT_EQ(direction_recovery(data, SupportMatrix(4)).weights(), Matrix::Zero(4, 4));
}

TEST(DirectionTest, RecoversStrongEdge) {
  Rng rng(17);
  int good = 0;
  for (int t = 0; t < 200; ++t) {
    const auto data = simulate(a1(5.0), 200, 1.0, rng);
    const auto out = direction_recovery(data, SupportMatrix::full(2));
    const double w = out.weight(1, 0);
    good += out.has_edge(0, 1) && std::abs(w - 5.0) <= 0.5;
  }
  // Gaussian equal-variance models identify direction through the variances.
  EXPECT_GE(good, 190);
}

TEST(DirectionTest, ErrorShrinksWithSamples) {
  Rng rng(18);
  const auto dag = sample_prior(prior(4), rng);
  double prev = std::numeric_limits<double>::infinity();
  for (int n : {20, 200, 2000}) {
    double err = 0.0;
    for (int t = 0; t < 30; ++t) {
      const auto data = simulate(dag, n, 1.0, rng);
      err += (direction_recovery(data, support_of(dag)).weights() - dag.weights()).norm();
    }
    EXPECT_LT(err, prev);
    prev = err;
  }
}

TEST(DirectionTest, OutputAlwaysAcyclic) {
  Rng rng(19);
  for (int t = 0; t < 50; ++t) {
    const auto data = simulate(sample_prior(prior(5), rng), 8, 1.0, rng);
    EXPECT_NO_THROW(topological_order(direction_recovery(data, SupportMatrix::full(5))));
  }
}

}  // namespace
}  // namespace npcd
