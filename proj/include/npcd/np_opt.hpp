#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "npcd/graph.hpp"
#include "npcd/rng.hpp"
#include "npcd/sem.hpp"

namespace npcd {

struct WeightedStructure {
  WeightedDag dag;
  double probability;
};

/// A prior with finitely many weighted DAGs, plus the per-pair masses and
/// normalized weights it induces (sums run over unordered pairs i < j).
class EnumeratedPrior {
 public:
  explicit EnumeratedPrior(std::vector<WeightedStructure> structures);

  // Every labeled DAG on d vertices with every weight combination, equally likely.
  static EnumeratedPrior uniform(int d, const std::vector<double>& weight_values,
                                 int max_d = kDefaultMaxEnumerationSize);
  // Each structure equally likely; continuous weights replaced by `draws`
  // sampled weight assignments per structure.
  static EnumeratedPrior sample_average(int d, const WeightLaw& law, int draws, Rng& rng,
                                        int max_d = kDefaultMaxEnumerationSize);

  int dim() const { return d_; }
  const std::vector<WeightedStructure>& structures() const { return structures_; }

  double null_mass(int i, int j) const;  // P(chi_ij = 0)
  double edge_mass(int i, int j) const;  // P(chi_ij = 1)
  double w_plus(int i, int j) const;
  double w_minus(int i, int j) const;

  WeightedDag sample(Rng& rng) const;

 private:
  std::size_t pair_index(int i, int j) const;

  int d_;
  std::vector<WeightedStructure> structures_;
  std::vector<double> null_mass_;
  std::vector<double> w_plus_;
  std::vector<double> w_minus_;
};

/// Zero-mean Gaussian component of a mixture over single observations.
struct GaussianComponent {
  double log_weight = 0.0;
  Matrix covariance;
  Matrix cholesky;   // lower factor of covariance
  Matrix precision;
  double log_det = 0.0;

  static GaussianComponent from_covariance(double weight, const Matrix& covariance);
};

/// Law of n i.i.d. observations given one component, mixed over components at
/// the top level (observations are dependent once the component is unknown).
struct GaussianMixture {
  int dim = 0;
  std::vector<GaussianComponent> components;

  bool empty() const { return components.empty(); }
  // log density of all n rows of `x` jointly, via log-sum-exp over components.
  double log_density(const Matrix& x) const;
  double log_density_from_scatter(const Matrix& scatter, int n) const;
  Matrix sample(int n, Rng& rng) const;
};

struct EdgeLikelihoodModel {
  int i = 0;
  int j = 0;
  int n = 0;
  double noise_var = 1.0;
  GaussianMixture null_law;  // data given chi_ij = 0
  GaussianMixture alt_law;   // data given chi_ij = 1
  double w_plus = 0.0;
  double w_minus = 0.0;

  bool degenerate() const { return null_law.empty() || alt_law.empty(); }
  // log(w_minus / w_plus), the pair-specific shift of the common threshold.
  double log_weight_factor() const;
};

std::vector<EdgeLikelihoodModel> build_edge_models(const EnumeratedPrior& prior, double noise_var,
                                                   int n);

/// log dP/dQ for the joint sample; throws ValidationError on a degenerate model.
double log_likelihood_ratio(const EdgeLikelihoodModel& model, const Dataset& data);
double log_likelihood_ratio(const EdgeLikelihoodModel& model, const Matrix& x);

/// Threshold gamma (kept as log gamma so gamma = 0 and gamma = inf are
/// representable) and tie randomization eta = P(declare no edge | tie).
struct CalibratedDetector {
  double log_gamma = 0.0;
  double eta = 1.0;
  double epsilon = 0.0;
  std::size_t mc_samples = 0;
  std::uint64_t seed = 0;
  double estimated_eps_plus = 0.0;  // on the calibration draws
  double boundary_mass = 0.0;
  std::vector<std::string> warnings;

  double gamma() const;
};

/// Chooses the largest gamma whose Monte-Carlo false positive rate
/// sum w+ P(dP/dQ < (w-/w+) gamma) stays within epsilon.
CalibratedDetector calibrate(const std::vector<EdgeLikelihoodModel>& models, double epsilon,
                             std::size_t mc_samples, std::uint64_t seed);

/// Per-pair likelihood-ratio decision; ties draw U from `rng`.
SupportMatrix detect(const std::vector<EdgeLikelihoodModel>& models,
                     const CalibratedDetector& detector, const Dataset& data, Rng& rng);

struct DetectorRates {
  double eps_plus = 0.0;
  double eps_minus = 0.0;
  double se_plus = 0.0;
  double se_minus = 0.0;
  std::size_t samples_per_pair = 0;
};

/// Fresh-draw estimate of (eps+, eps-) for the threshold rule at log_gamma
/// (ties resolved with eta).
DetectorRates evaluate_detector(const std::vector<EdgeLikelihoodModel>& models, double log_gamma,
                                double eta, std::size_t mc_samples, std::uint64_t seed);

}  // namespace npcd
