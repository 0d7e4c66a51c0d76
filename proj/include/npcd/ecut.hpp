#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "npcd/graph.hpp"
#include "npcd/residual_table.hpp"
#include "npcd/sem.hpp"
#include "npcd/stats.hpp"

namespace npcd {

enum class ThresholdMode { kPerPair, kSingle };
enum class EnumerationOrder { kBySizeAscending, kShuffled };

struct EcutConfig {
  double epsilon = 0.05;
  double noise_var = 1.0;
  ThresholdMode mode = ThresholdMode::kPerPair;
  // Unset means min(d - 2, n - 1).
  std::optional<int> max_parent_size;
  EnumerationOrder order = EnumerationOrder::kBySizeAscending;
  std::uint64_t shuffle_seed = 0;  // only read for kShuffled

  void validate() const;
  // Throws ConfigError when an explicit cap leaves no residual degrees of freedom.
  int resolved_parent_cap(int d, int n) const;
};

struct EcutWitness {
  std::vector<int> parents_i;
  std::vector<int> parents_j;
  double rss_i = 0.0;
  double rss_j = 0.0;
  double gap = 0.0;  // |rss_i - rss_j|
  double tau = 0.0;
};

struct EdgeDecisionTrace {
  int i = 0;
  int j = 0;
  bool edge = false;
  std::optional<EcutWitness> witness;  // present iff edge == false
  std::vector<double> thresholds_used;
  std::size_t tests = 0;
  // False when the parent-set cap excludes some subsets of V \ {i, j}; the
  // false-positive bound then no longer covers this decision.
  bool guarantee_valid = true;
};

struct DiscoveryResult {
  SupportMatrix support;
  std::vector<EdgeDecisionTrace> traces;  // pairs (i < j) in row-major order
  bool guarantee_valid = true;
  int parent_cap = 0;
};

/// Per-dataset state for the residual-gap edge test: all regressions and all
/// thresholds are computed up front; detect() is then read-only and can run
/// concurrently for different pairs.
class EcutDetector {
 public:
  EcutDetector(const Dataset& data, const EcutConfig& config, bool parallel_build = true);

  EdgeDecisionTrace detect(int i, int j) const;

  const ResidualTable& residuals() const { return table_; }
  int parent_cap() const { return cap_; }
  double threshold(int p, int q) const;

 private:
  EcutConfig config_;
  int d_;
  int cap_;
  ResidualTable table_;
  std::vector<double> tau_;  // (cap+1)^2, symmetric
};

EdgeDecisionTrace detect_edge(const Dataset& data, int i, int j, const EcutConfig& config);

/// All unordered pairs; pairs are distributed over OpenMP threads.
DiscoveryResult discover(const Dataset& data, const EcutConfig& config);
/// Single-threaded reference with identical output.
DiscoveryResult discover_serial(const Dataset& data, const EcutConfig& config);

}  // namespace npcd
