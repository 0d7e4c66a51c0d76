#include "npcd/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <string>

#include "npcd/errors.hpp"

namespace npcd {

WeightedDag::WeightedDag(Matrix weights) : a_(std::move(weights)) {
  if (a_.rows() < 1 || a_.rows() != a_.cols()) {
    throw ValidationError("WeightedDag: weights must be a non-empty square matrix");
  }
  for (Eigen::Index i = 0; i < a_.rows(); ++i) {
    if (a_(i, i) != 0.0) throw ValidationError("WeightedDag: nonzero diagonal entry");
  }
  if (!a_.allFinite()) throw ValidationError("WeightedDag: non-finite weight");
  (void)topological_order(a_);
}

WeightedDag WeightedDag::empty(int d) {
  if (d < 1) throw ValidationError("WeightedDag: d must be >= 1");
  return WeightedDag(Matrix::Zero(d, d));
}

int WeightedDag::edge_count() const {
  return static_cast<int>((a_.array() != 0.0).count());
}

std::vector<int> WeightedDag::parents(int child) const {
  std::vector<int> out;
  for (int j = 0; j < size(); ++j) {
    if (a_(child, j) != 0.0) out.push_back(j);
  }
  return out;
}

SupportMatrix::SupportMatrix(int d) : d_(d), bits_(static_cast<std::size_t>(d) * d, 0) {
  if (d < 1) throw ValidationError("SupportMatrix: d must be >= 1");
}

SupportMatrix SupportMatrix::full(int d) {
  SupportMatrix s(d);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) s.set_edge(i, j, true);
  return s;
}

SupportMatrix SupportMatrix::from_entries(const std::vector<std::vector<int>>& entries) {
  const int d = static_cast<int>(entries.size());
  SupportMatrix s(d);
  for (int i = 0; i < d; ++i) {
    if (static_cast<int>(entries[i].size()) != d) {
      throw ValidationError("SupportMatrix: ragged rows");
    }
    for (int j = 0; j < d; ++j) {
      const int v = entries[i][j];
      if (v != 0 && v != 1) throw ValidationError("SupportMatrix: entries must be 0 or 1");
      if (i == j && v != 0) throw ValidationError("SupportMatrix: nonzero diagonal");
      if (v != entries[j][i]) throw ValidationError("SupportMatrix: not symmetric");
      if (i < j && v) s.set_edge(i, j, true);
    }
  }
  return s;
}

void SupportMatrix::set_edge(int i, int j, bool present) {
  if (i == j) throw ValidationError("SupportMatrix: self loop");
  bits_[index(i, j)] = present;
  bits_[index(j, i)] = present;
}

int SupportMatrix::edge_count() const {
  int c = 0;
  for (int i = 0; i < d_; ++i)
    for (int j = i + 1; j < d_; ++j) c += edge(i, j);
  return c;
}

SupportMatrix support_of(const WeightedDag& dag) {
  const int d = dag.size();
  SupportMatrix s(d);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (dag.weights()(i, j) != 0.0 || dag.weights()(j, i) != 0.0) s.set_edge(i, j, true);
  return s;
}

std::vector<int> topological_order(const Matrix& weights) {
  const int d = static_cast<int>(weights.rows());
  std::vector<int> indegree(d, 0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (weights(i, j) != 0.0) ++indegree[i];

  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (int v = 0; v < d; ++v)
    if (indegree[v] == 0) ready.push(v);

  std::vector<int> order;
  order.reserve(d);
  while (!ready.empty()) {
    const int v = ready.top();
    ready.pop();
    order.push_back(v);
    for (int c = 0; c < d; ++c) {
      if (weights(c, v) != 0.0 && --indegree[c] == 0) ready.push(c);
    }
  }
  if (static_cast<int>(order.size()) != d) {
    throw ValidationError("graph contains a directed cycle");
  }
  return order;
}

WeightedDag permute(const WeightedDag& dag, const std::vector<int>& perm) {
  const int d = dag.size();
  if (static_cast<int>(perm.size()) != d) throw ValidationError("permute: size mismatch");
  std::vector<char> seen(d, 0);
  for (int p : perm) {
    if (p < 0 || p >= d || seen[p]) throw ValidationError("permute: not a permutation");
    seen[p] = 1;
  }
  Matrix b = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) b(perm[i], perm[j]) = dag.weights()(i, j);
  return WeightedDag(std::move(b));
}

void validate_weight_law(const WeightLaw& law) {
  std::visit(
      [](const auto& w) {
        using T = std::decay_t<decltype(w)>;
        if constexpr (std::is_same_v<T, UniformTwoSided>) {
          if (!(w.lo > 0.0) || !(w.hi >= w.lo) || !std::isfinite(w.hi)) {
            throw ValidationError("uniform-two-sided law needs 0 < lo <= hi");
          }
        } else if constexpr (std::is_same_v<T, FiniteSupport>) {
          if (w.values.empty()) throw ValidationError("finite-support law needs values");
          for (double v : w.values)
            if (v == 0.0 || !std::isfinite(v))
              throw ValidationError("finite-support values must be finite and nonzero");
          if (!w.probabilities.empty()) {
            if (w.probabilities.size() != w.values.size())
              throw ValidationError("finite-support probabilities/values size mismatch");
            double total = 0.0;
            for (double p : w.probabilities) {
              if (!(p >= 0.0)) throw ValidationError("negative probability");
              total += p;
            }
            if (std::abs(total - 1.0) > 1e-9)
              throw ValidationError("finite-support probabilities must sum to 1");
          }
        } else {
          if (!(w.offset > 0.0) || !std::isfinite(w.offset))
            throw ValidationError("shifted-exponential offset must be positive");
        }
      },
      law);
}

double sample_weight(const WeightLaw& law, Rng& rng) {
  return std::visit(
      [&rng](const auto& w) -> double {
        using T = std::decay_t<decltype(w)>;
        if constexpr (std::is_same_v<T, UniformTwoSided>) {
          std::uniform_real_distribution<double> mag(w.lo, w.hi);
          std::bernoulli_distribution sign(0.5);
          const double m = mag(rng);
          return sign(rng) ? m : -m;
        } else if constexpr (std::is_same_v<T, FiniteSupport>) {
          if (w.values.size() == 1) return w.values.front();
          if (w.probabilities.empty()) {
            std::uniform_int_distribution<std::size_t> pick(0, w.values.size() - 1);
            return w.values[pick(rng)];
          }
          std::discrete_distribution<std::size_t> pick(w.probabilities.begin(),
                                                       w.probabilities.end());
          return w.values[pick(rng)];
        } else {
          std::exponential_distribution<double> e(1.0);
          return w.offset + e(rng);
        }
      },
      law);
}

void PriorSpec::validate() const {
  if (d < 1) throw ValidationError("prior: d must be >= 1");
  if (!(edge_prob > 0.0 && edge_prob < 1.0)) {
    throw ValidationError("prior: edge_prob must lie in (0, 1)");
  }
  validate_weight_law(weight_law);
}

WeightedDag sample_lower_triangular(const PriorSpec& spec, Rng& rng) {
  spec.validate();
  Matrix a = Matrix::Zero(spec.d, spec.d);
  std::bernoulli_distribution keep(spec.edge_prob);
  for (int i = 1; i < spec.d; ++i)
    for (int j = 0; j < i; ++j)
      if (keep(rng)) a(i, j) = sample_weight(spec.weight_law, rng);
  return WeightedDag(std::move(a));
}

std::vector<int> random_permutation(int d, Rng& rng) {
  std::vector<int> perm(d);
  std::iota(perm.begin(), perm.end(), 0);
  // Fisher-Yates written out: std::shuffle's draw sequence is implementation-defined.
  for (int k = d - 1; k > 0; --k) {
    std::uniform_int_distribution<int> pick(0, k);
    std::swap(perm[k], perm[pick(rng)]);
  }
  return perm;
}

WeightedDag sample_prior(const PriorSpec& spec, Rng& rng) {
  WeightedDag lower = sample_lower_triangular(spec, rng);
  if (!spec.relabel) return lower;
  return permute(lower, random_permutation(spec.d, rng));
}

namespace {

bool is_acyclic_mask(int d, std::uint64_t mask, const std::vector<std::pair<int, int>>& slots) {
  Matrix a = Matrix::Zero(d, d);
  for (std::size_t b = 0; b < slots.size(); ++b)
    if (mask >> b & 1U) a(slots[b].first, slots[b].second) = 1.0;
  try {
    (void)topological_order(a);
    return true;
  } catch (const ValidationError&) {
    return false;
  }
}

}  // namespace

std::vector<WeightedDag> enumerate_dags(int d, const std::vector<double>& weight_values,
                                        int max_d) {
  if (d < 1) throw ValidationError("enumerate_dags: d must be >= 1");
  if (d > max_d) {
    throw CapacityError("enumerate_dags: d = " + std::to_string(d) +
                        " exceeds the enumeration cap " + std::to_string(max_d));
  }
  if (weight_values.empty()) throw ValidationError("enumerate_dags: weight_values is empty");
  for (double w : weight_values)
    if (w == 0.0 || !std::isfinite(w))
      throw ValidationError("enumerate_dags: weights must be finite and nonzero");

  std::vector<std::pair<int, int>> slots;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (i != j) slots.emplace_back(i, j);

  std::vector<WeightedDag> out;
  const std::uint64_t n_masks = std::uint64_t{1} << slots.size();
  const std::size_t k = weight_values.size();
  for (std::uint64_t mask = 0; mask < n_masks; ++mask) {
    if (!is_acyclic_mask(d, mask, slots)) continue;
    std::vector<std::size_t> present;
    for (std::size_t b = 0; b < slots.size(); ++b)
      if (mask >> b & 1U) present.push_back(b);
    // Odometer over weight assignments to the present slots.
    std::vector<std::size_t> digit(present.size(), 0);
    while (true) {
      Matrix a = Matrix::Zero(d, d);
      for (std::size_t e = 0; e < present.size(); ++e)
        a(slots[present[e]].first, slots[present[e]].second) = weight_values[digit[e]];
      out.emplace_back(std::move(a));
      std::size_t pos = 0;
      while (pos < digit.size() && ++digit[pos] == k) digit[pos++] = 0;
      if (pos == digit.size()) break;
    }
  }
  return out;
}

}  // namespace npcd
