#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "npcd/graph.hpp"
#include "npcd/sem.hpp"

namespace npcd {

constexpr int kDefaultMaxOrderingSize = 7;

// (1/n) X^T X. Observations are zero mean by model, so no centering.
Matrix empirical_covariance(const Dataset& data);

/// -(n d / 2) log(2 pi sigma^2) - (n / (2 sigma^2)) tr((I - A)^T (I - A) S)
double dag_log_likelihood(const WeightedDag& dag, const Matrix& emp_cov, int n, double noise_var);

/// Exhaustive search over vertex orderings. For an ordering the profile
/// likelihood is maximized by regressing every vertex on all its predecessors,
/// so only residual sums are compared.
struct OrderingSearch {
  std::vector<int> best_order;   // lexicographically smallest among ties
  double best_rss = 0.0;         // sum over vertices
  Matrix constrained_rss;        // (i, j): best sum with no edge between i and j
};

OrderingSearch search_orderings(const Dataset& data, int max_d = kDefaultMaxOrderingSize);
OrderingSearch search_orderings_serial(const Dataset& data, int max_d = kDefaultMaxOrderingSize);

/// Dense least-squares DAG for a fixed ordering (each vertex on all predecessors).
WeightedDag fit_ordering(const Dataset& data, const std::vector<int>& order);

enum class GlrtThresholdMode { kChiSquared, kMonteCarlo };

/// Null generator for Monte-Carlo calibration: a fixed DAG or a random-DAG prior.
using NullModel = std::variant<WeightedDag, PriorSpec>;

struct GlrtConfig {
  double epsilon = 0.1;
  double noise_var = 1.0;
  GlrtThresholdMode mode = GlrtThresholdMode::kMonteCarlo;
  int df = 1;                          // chi-squared mode; heuristic
  std::optional<NullModel> null_model; // Monte-Carlo mode; unset = empty graph
  std::size_t null_samples = 2000;
  std::uint64_t seed = 0;
  int max_d = kDefaultMaxOrderingSize;

  void validate() const;
};

/// Lambda_ij = 2 (sup over all DAGs - sup over DAGs without i-j); symmetric, >= 0.
Matrix glrt_statistics(const Dataset& data, int max_d = kDefaultMaxOrderingSize);
Matrix glrt_statistics(const OrderingSearch& search, double noise_var);

/// Threshold for Lambda: chi-squared (1 - epsilon) quantile, or the empirical
/// (1 - epsilon) quantile of Lambda over truly absent pairs of null datasets.
double glrt_threshold(const GlrtConfig& config, int d, int n);

struct GlrtResult {
  SupportMatrix support;
  Matrix statistics;
  double threshold = 0.0;
};

/// Declares an edge iff Lambda_ij > threshold.
GlrtResult glrt_detect(const Dataset& data, const GlrtConfig& config,
                       std::optional<double> threshold = std::nullopt);

struct LassoFit {
  Vector coefficients;
  double objective = 0.0;
  int sweeps = 0;
  bool converged = false;
};

/// (1/2n) ||y - Z b||^2 + lambda ||b||_1
double lasso_objective(const Matrix& design, const Vector& target, const Vector& coef,
                       double lambda);

/// Cyclic coordinate descent; stops when the largest scaled coordinate change
/// and the relative duality gap both fall below `tol`.
LassoFit lasso_coordinate_descent(const Matrix& design, const Vector& target, double lambda,
                                  double tol = 1e-8, int max_sweeps = 100000);

/// Smallest lambda that zeroes every neighborhood fit.
double lasso_lambda_max(const Dataset& data);

/// Row i holds node i's fit on the other vertices (diagonal zero).
Matrix lasso_coefficients(const Dataset& data, double lambda, double tol = 1e-8);

/// OR-rule symmetrization of the per-node fits.
SupportMatrix lasso_neighborhood(const Dataset& data, double lambda, double tol = 1e-8);

/// Unrestricted maximum likelihood DAG (best ordering, dense fit) masked by the
/// support: each support edge keeps the direction and weight of the ML fit.
WeightedDag direction_recovery(const Dataset& data, const SupportMatrix& support,
                               int max_d = kDefaultMaxOrderingSize);

}  // namespace npcd
