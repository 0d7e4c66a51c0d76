#include "npcd/sem.hpp"

#include <cmath>

#include "npcd/errors.hpp"

namespace npcd {

Dataset::Dataset(Matrix values, double noise_var) : x_(std::move(values)), noise_var_(noise_var) {
  if (x_.rows() < 1 || x_.cols() < 1) throw ValidationError("Dataset: need n >= 1 and d >= 1");
  if (!(noise_var_ > 0.0) || !std::isfinite(noise_var_)) {
    throw ValidationError("Dataset: noise variance must be positive");
  }
  if (!x_.allFinite()) throw ValidationError("Dataset: non-finite observation");
}

Dataset simulate(const WeightedDag& dag, int n, double noise_var, Rng& rng) {
  if (n < 1) throw ValidationError("simulate: n must be >= 1");
  if (!(noise_var > 0.0) || !std::isfinite(noise_var)) {
    throw ValidationError("simulate: noise variance must be positive");
  }
  const int d = dag.size();
  const auto order = topological_order(dag);
  const Matrix& a = dag.weights();
  const double sd = std::sqrt(noise_var);
  std::normal_distribution<double> normal(0.0, 1.0);

  Matrix x(n, d);
  Vector w(d);
  for (int k = 0; k < n; ++k) {
    for (int v = 0; v < d; ++v) w(v) = sd * normal(rng);
    for (int v : order) {
      double value = w(v);
      for (int u = 0; u < d; ++u)
        if (a(v, u) != 0.0) value += a(v, u) * x(k, u);
      x(k, v) = value;
    }
  }
  return Dataset(std::move(x), noise_var);
}

Vector parent_vector(const Dataset& data, int vertex, std::span<const int> parents, int k) {
  if (k < 0 || k >= data.samples()) throw ValidationError("parent_vector: sample index out of range");
  if (vertex < 0 || vertex >= data.dim()) throw ValidationError("parent_vector: vertex out of range");
  Vector z(static_cast<Eigen::Index>(parents.size()));
  for (std::size_t l = 0; l < parents.size(); ++l) {
    const int p = parents[l];
    if (p < 0 || p >= data.dim()) throw ValidationError("parent_vector: parent out of range");
    if (p == vertex) throw ValidationError("parent_vector: vertex listed as its own parent");
    z(static_cast<Eigen::Index>(l)) = data.values()(k, p);
  }
  return z;
}

Matrix select_columns(const Dataset& data, std::span<const int> vertices) {
  Matrix out(data.samples(), static_cast<Eigen::Index>(vertices.size()));
  for (std::size_t l = 0; l < vertices.size(); ++l) {
    const int v = vertices[l];
    if (v < 0 || v >= data.dim()) throw ValidationError("select_columns: vertex out of range");
    out.col(static_cast<Eigen::Index>(l)) = data.values().col(v);
  }
  return out;
}

Matrix population_covariance(const WeightedDag& dag, double noise_var) {
  const int d = dag.size();
  const Matrix ia = Matrix::Identity(d, d) - dag.weights();
  const Matrix inv = ia.lu().inverse();
  return noise_var * inv * inv.transpose();
}

}  // namespace npcd
