#include "npcd/ecut.hpp"

#include <algorithm>
#include <cmath>

#include "npcd/errors.hpp"
#include "npcd/parallel.hpp"
#include "npcd/rng.hpp"

namespace npcd {

void EcutConfig::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ValidationError("ecut: epsilon must lie in (0, 1)");
  if (!(noise_var > 0.0) || !std::isfinite(noise_var))
    throw ValidationError("ecut: noise variance must be positive");
  if (max_parent_size && *max_parent_size < 0)
    throw ValidationError("ecut: max_parent_size must be >= 0");
}

int EcutConfig::resolved_parent_cap(int d, int n) const {
  const int structural = std::max(0, d - 2);
  if (max_parent_size) {
    if (*max_parent_size >= n) {
      throw ConfigError("ecut: max_parent_size must be below the sample count");
    }
    return std::min(*max_parent_size, structural);
  }
  return std::min(structural, n - 1);
}

EcutDetector::EcutDetector(const Dataset& data, const EcutConfig& config, bool parallel_build)
    : config_(config),
      d_(data.dim()),
      cap_((config.validate(), config.resolved_parent_cap(data.dim(), data.samples()))),
      table_(parallel_build ? ResidualTable::build(data, cap_)
                            : ResidualTable::build_serial(data, cap_)) {
  const int n = data.samples();
  const int side = cap_ + 1;
  tau_.assign(static_cast<std::size_t>(side) * side, 0.0);
  if (config_.mode == ThresholdMode::kSingle) {
    const double tau = single_threshold(n, std::max(d_, 2), config_.noise_var, config_.epsilon).tau;
    std::fill(tau_.begin(), tau_.end(), tau);
    return;
  }
  for (int p = 0; p < side; ++p) {
    for (int q = p; q < side; ++q) {
      const double tau = solve_threshold(n, p, q, config_.noise_var, config_.epsilon).tau;
      tau_[p * side + q] = tau;
      tau_[q * side + p] = tau;
    }
  }
}

double EcutDetector::threshold(int p, int q) const { return tau_[p * (cap_ + 1) + q]; }

EdgeDecisionTrace EcutDetector::detect(int i, int j) const {
  if (i == j || i < 0 || j < 0 || i >= d_ || j >= d_) {
    throw ValidationError("detect_edge: need two distinct vertices in range");
  }
  EdgeDecisionTrace trace;
  trace.i = i;
  trace.j = j;
  trace.guarantee_valid = cap_ >= d_ - 2;

  const VertexMask all = (VertexMask{1} << d_) - 1;
  const VertexMask rest = all & ~(VertexMask{1} << i) & ~(VertexMask{1} << j);
  std::vector<VertexMask> subsets;
  for (VertexMask s = rest;; s = (s - 1) & rest) {
    if (mask_size(s) <= cap_) subsets.push_back(s);
    if (s == 0) break;
  }
  std::sort(subsets.begin(), subsets.end(), [](VertexMask a, VertexMask b) {
    return mask_size(a) != mask_size(b) ? mask_size(a) < mask_size(b) : a < b;
  });

  std::vector<std::pair<VertexMask, VertexMask>> candidates;
  candidates.reserve(subsets.size() * subsets.size());
  for (VertexMask si : subsets)
    for (VertexMask sj : subsets) candidates.emplace_back(si, sj);
  if (config_.order == EnumerationOrder::kShuffled) {
    Rng rng = StreamFactory(config_.shuffle_seed)
                  .stream("ecut-order", static_cast<std::uint64_t>(std::min(i, j)) * 4096 +
                                            static_cast<std::uint64_t>(std::max(i, j)));
    for (std::size_t k = candidates.size(); k > 1; --k) {
      std::uniform_int_distribution<std::size_t> pick(0, k - 1);
      std::swap(candidates[k - 1], candidates[pick(rng)]);
    }
  } else {
    std::stable_sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
      return mask_size(a.first) + mask_size(a.second) < mask_size(b.first) + mask_size(b.second);
    });
  }

  for (const auto& [si, sj] : candidates) {
    const double rss_i = table_.rss(i, si);
    const double rss_j = table_.rss(j, sj);
    const double tau = threshold(mask_size(si), mask_size(sj));
    const double gap = std::abs(rss_i - rss_j);
    ++trace.tests;
    trace.thresholds_used.push_back(tau);
    if (gap <= tau) {
      trace.edge = false;
      trace.witness = EcutWitness{mask_vertices(si), mask_vertices(sj), rss_i, rss_j, gap, tau};
      return trace;
    }
  }
  trace.edge = true;
  return trace;
}

EdgeDecisionTrace detect_edge(const Dataset& data, int i, int j, const EcutConfig& config) {
  return EcutDetector(data, config, /*parallel_build=*/false).detect(i, j);
}

namespace {

std::vector<std::pair<int, int>> unordered_pairs(int d) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) pairs.emplace_back(i, j);
  return pairs;
}

DiscoveryResult assemble(int d, int cap, std::vector<EdgeDecisionTrace> traces) {
  DiscoveryResult out;
  out.support = SupportMatrix(d);
  out.parent_cap = cap;
  out.guarantee_valid = cap >= d - 2;
  for (const auto& t : traces)
    if (t.edge) out.support.set_edge(t.i, t.j, true);
  out.traces = std::move(traces);
  return out;
}

}  // namespace

DiscoveryResult discover(const Dataset& data, const EcutConfig& config) {
  const EcutDetector detector(data, config, /*parallel_build=*/true);
  const auto pairs = unordered_pairs(data.dim());
  std::vector<EdgeDecisionTrace> traces(pairs.size());
  const auto count = static_cast<std::ptrdiff_t>(pairs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    const auto& [i, j] = pairs[static_cast<std::size_t>(k)];
    traces[static_cast<std::size_t>(k)] = detector.detect(i, j);
  }
  return assemble(data.dim(), detector.parent_cap(), std::move(traces));
}

DiscoveryResult discover_serial(const Dataset& data, const EcutConfig& config) {
  const EcutDetector detector(data, config, /*parallel_build=*/false);
  std::vector<EdgeDecisionTrace> traces;
  for (const auto& [i, j] : unordered_pairs(data.dim())) traces.push_back(detector.detect(i, j));
  return assemble(data.dim(), detector.parent_cap(), std::move(traces));
}

}  // namespace npcd
