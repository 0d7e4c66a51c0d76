#pragma once

#include <span>
#include <vector>

#include "npcd/graph.hpp"
#include "npcd/rng.hpp"

namespace npcd {

/// n observations of d node values (row k = X_k) with known noise variance.
class Dataset {
 public:
  Dataset(Matrix values, double noise_var);

  int samples() const { return static_cast<int>(x_.rows()); }
  int dim() const { return static_cast<int>(x_.cols()); }
  double noise_var() const { return noise_var_; }
  const Matrix& values() const { return x_; }
  auto column(int v) const { return x_.col(v); }

  // Uncentered scatter X^T X.
  Matrix scatter() const { return x_.transpose() * x_; }

 private:
  Matrix x_;
  double noise_var_;
};

/// Draws n observations of X = A X + W, W ~ N(0, noise_var I), by forward
/// substitution in topological order. Each row consumes d standard normals in
/// vertex-index order.
Dataset simulate(const WeightedDag& dag, int n, double noise_var, Rng& rng);

/// [X_k(parents[0]), X_k(parents[1]), ...]
Vector parent_vector(const Dataset& data, int vertex, std::span<const int> parents, int k);

/// Rows of the columns `vertices`, in the given order (n x |vertices|).
Matrix select_columns(const Dataset& data, std::span<const int> vertices);

/// sigma^2 (I - A)^{-1} (I - A)^{-T}
Matrix population_covariance(const WeightedDag& dag, double noise_var);

}  // namespace npcd
