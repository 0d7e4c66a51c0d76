#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "npcd/baselines.hpp"
#include "npcd/ecut.hpp"
#include "npcd/graph.hpp"
#include "npcd/np_opt.hpp"

namespace npcd {

enum class MethodKind { kEcut, kOracle, kAllEdges, kGlrt, kLasso, kOptimal, kImport };

const char* method_kind_name(MethodKind kind);
MethodKind parse_method_kind(const std::string& name);

struct MethodSpec {
  MethodKind kind = MethodKind::kEcut;
  std::string label;  // empty: derived from kind

  // ecut
  ThresholdMode ecut_mode = ThresholdMode::kPerPair;
  std::optional<int> max_parent_size;
  // glrt; epsilon and noise variance come from the experiment
  GlrtThresholdMode glrt_mode = GlrtThresholdMode::kMonteCarlo;
  int glrt_df = 1;
  std::size_t glrt_null_samples = 500;
  // lasso: one report per regularizer value instead of per epsilon
  std::vector<double> lasso_lambdas;
  // optimal
  std::size_t optimal_mc_samples = 4000;
  // import: <dir>/<trial>.json support files
  std::string import_dir;

  std::string name() const;
  bool epsilon_dependent() const;
};

using ExperimentPrior = std::variant<PriorSpec, EnumeratedPrior>;

struct ExperimentSpec {
  ExperimentPrior prior = PriorSpec{};
  int n = 10;
  double noise_var = 1.0;
  std::size_t trials = 100;
  std::vector<double> epsilons{0.05};
  std::vector<MethodSpec> methods;
  std::uint64_t seed = 0;

  int dim() const;
  void validate() const;
};

struct ErrorRateReport {
  std::string method;
  std::optional<double> epsilon_target;
  std::optional<double> parameter;  // lasso regularizer
  std::size_t trials = 0;           // trials that contributed
  std::size_t excluded_trials = 0;  // method failures
  std::uint64_t fp_count = 0;
  std::uint64_t fn_count = 0;
  std::uint64_t tn_count = 0;
  std::uint64_t tp_count = 0;
  // Undefined when no trial had a slot of the relevant kind.
  std::optional<double> eps_plus;
  std::optional<double> eps_minus;
  double se_plus = 0.0;  // batched means
  double se_minus = 0.0;
  double delta_se_plus = 0.0;
  double delta_se_minus = 0.0;
  // Per unordered pair (row-major i < j): false positives and absent-edge slots.
  std::vector<std::uint64_t> pair_fp;
  std::vector<std::uint64_t> pair_null;
};

struct TrialOutcome {
  std::uint32_t fp = 0;
  std::uint32_t fn = 0;
  std::vector<int> fp_pairs;  // pair indices
  bool failed = false;
  std::string error;
};

struct TrialRecord {
  std::size_t trial = 0;
  int edges = 0;       // present pairs in the truth
  int null_slots = 0;  // absent pairs in the truth
  std::vector<std::uint8_t> truth;  // per pair, row-major i < j
  std::vector<TrialOutcome> outcomes;  // parallel to the report list
};

struct ExperimentResult {
  std::vector<ErrorRateReport> reports;
  std::vector<TrialRecord> trials;
  // Empirical prior weights per unordered pair; each vector sums to 1 when defined.
  std::vector<double> empirical_w_plus;
  std::vector<double> empirical_w_minus;
};

struct TrialDraw {
  WeightedDag truth;
  Dataset data;
};

/// Truth and observations of trial `trial` under master seed `seed`; the
/// benchmark and the simulate command share this derivation.
TrialDraw draw_trial(const ExperimentPrior& prior, int n, double noise_var, std::uint64_t seed,
                     std::size_t trial);

ExperimentResult run_experiment(const ExperimentSpec& spec);
// Trials one after another, every method in its serial form.
ExperimentResult run_experiment_serial(const ExperimentSpec& spec);

struct SymmetryDiagnostic {
  bool performed = false;
  std::string reason;
  double aggregated = 0.0;
  double pair_rate = 0.0;  // vertices 0 and 1
  double tolerance = 0.0;  // 3 combined SE
  bool flagged = false;
};

bool prior_is_symmetric(const ExperimentPrior& prior);

/// Under a relabeling-invariant prior the aggregated eps+ equals the
/// false-positive probability of any single pair; compares against pair (0, 1).
SymmetryDiagnostic symmetry_collapse_check(const ErrorRateReport& report,
                                           const ExperimentPrior& prior);

/// CSV: method,epsilon_target,eps_plus,eps_minus,se_plus,se_minus,trials
std::string emit_curves(const std::vector<ErrorRateReport>& reports);

}  // namespace npcd
