#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "npcd/rng.hpp"

namespace npcd {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Weighted adjacency matrix of a DAG under the convention X = A X + W:
/// entry (i, j) is the weight of the edge j -> i.
///
/// Construction validates a square shape, a zero diagonal, finite entries and
/// acyclicity; an invalid matrix never becomes a WeightedDag.
class WeightedDag {
 public:
  explicit WeightedDag(Matrix weights);

  static WeightedDag empty(int d);

  int size() const { return static_cast<int>(a_.rows()); }
  const Matrix& weights() const { return a_; }

  // Weight of parent -> child.
  double weight(int child, int parent) const { return a_(child, parent); }
  bool has_edge(int from, int to) const { return a_(to, from) != 0.0; }
  int edge_count() const;
  std::vector<int> parents(int child) const;

  bool operator==(const WeightedDag& other) const { return a_ == other.a_; }

 private:
  Matrix a_;
};

/// Symmetric binary edge-presence matrix with zero diagonal.
class SupportMatrix {
 public:
  SupportMatrix() = default;
  explicit SupportMatrix(int d);

  static SupportMatrix full(int d);
  // Throws ValidationError unless `entries` is a symmetric 0/1 matrix with zero diagonal.
  static SupportMatrix from_entries(const std::vector<std::vector<int>>& entries);

  int size() const { return d_; }
  bool edge(int i, int j) const { return bits_[index(i, j)] != 0; }
  // Sets both (i, j) and (j, i); i == j is rejected.
  void set_edge(int i, int j, bool present);
  int edge_count() const;  // unordered pairs

  bool operator==(const SupportMatrix& other) const = default;

 private:
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * d_ + j; }

  int d_ = 0;
  std::vector<std::uint8_t> bits_;
};

SupportMatrix support_of(const WeightedDag& dag);

/// Kahn's algorithm, smallest index first among ready vertices, so the empty
/// graph yields the identity. order[k] is the k-th vertex; every edge goes
/// from earlier to later. Throws ValidationError on a cycle.
std::vector<int> topological_order(const Matrix& weights);
inline std::vector<int> topological_order(const WeightedDag& dag) {
  return topological_order(dag.weights());
}

/// Relabels vertices: vertex v of `dag` becomes vertex perm[v].
WeightedDag permute(const WeightedDag& dag, const std::vector<int>& perm);

struct UniformTwoSided {
  double lo = 0.5;
  double hi = 5.0;
};
struct FiniteSupport {
  std::vector<double> values;
  std::vector<double> probabilities;  // empty means uniform
};
struct ShiftedExponential {
  double offset = 1.0;
};
using WeightLaw = std::variant<UniformTwoSided, FiniteSupport, ShiftedExponential>;

void validate_weight_law(const WeightLaw& law);
double sample_weight(const WeightLaw& law, Rng& rng);

/// Random-DAG prior: keep each strictly lower-triangular slot independently
/// with probability edge_prob, draw its weight from weight_law, then
/// optionally relabel the vertices with a uniform random permutation.
struct PriorSpec {
  int d = 5;
  double edge_prob = 0.5;
  WeightLaw weight_law = UniformTwoSided{};
  bool relabel = true;

  void validate() const;
};

WeightedDag sample_lower_triangular(const PriorSpec& spec, Rng& rng);
std::vector<int> random_permutation(int d, Rng& rng);
WeightedDag sample_prior(const PriorSpec& spec, Rng& rng);

constexpr int kDefaultMaxEnumerationSize = 4;

/// Every labeled DAG on d vertices with each present edge carrying every
/// combination of weight_values. Throws CapacityError when d > max_d.
std::vector<WeightedDag> enumerate_dags(int d, const std::vector<double>& weight_values,
                                        int max_d = kDefaultMaxEnumerationSize);

}  // namespace npcd
