#include "npcd/np_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "npcd/errors.hpp"
#include "npcd/parallel.hpp"

namespace npcd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_sum_exp(const std::vector<double>& terms) {
  double m = -kInf;
  for (double t : terms) m = std::max(m, t);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double t : terms) s += std::exp(t - m);
  return m + std::log(s);
}

}  // namespace

EnumeratedPrior::EnumeratedPrior(std::vector<WeightedStructure> structures)
    : structures_(std::move(structures)) {
  if (structures_.empty()) throw ValidationError("EnumeratedPrior: no structures");
  d_ = structures_.front().dag.size();
  double total = 0.0;
  for (const auto& s : structures_) {
    if (s.dag.size() != d_) throw ValidationError("EnumeratedPrior: mixed vertex counts");
    if (!(s.probability >= 0.0)) throw ValidationError("EnumeratedPrior: negative probability");
    total += s.probability;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ValidationError("EnumeratedPrior: probabilities must sum to 1");
  }

  const std::size_t pairs = static_cast<std::size_t>(d_) * (d_ - 1) / 2;
  null_mass_.assign(pairs, 0.0);
  for (const auto& s : structures_) {
    const SupportMatrix chi = support_of(s.dag);
    for (int i = 0; i < d_; ++i)
      for (int j = i + 1; j < d_; ++j)
        if (!chi.edge(i, j)) null_mass_[pair_index(i, j)] += s.probability;
  }
  const double null_total = std::accumulate(null_mass_.begin(), null_mass_.end(), 0.0);
  const double edge_total = static_cast<double>(pairs) - null_total;
  w_plus_.assign(pairs, 0.0);
  w_minus_.assign(pairs, 0.0);
  for (std::size_t k = 0; k < pairs; ++k) {
    if (null_total > 0.0) w_plus_[k] = null_mass_[k] / null_total;
    if (edge_total > 0.0) w_minus_[k] = (1.0 - null_mass_[k]) / edge_total;
  }
}

EnumeratedPrior EnumeratedPrior::uniform(int d, const std::vector<double>& weight_values,
                                         int max_d) {
  auto dags = enumerate_dags(d, weight_values, max_d);
  const double p = 1.0 / static_cast<double>(dags.size());
  std::vector<WeightedStructure> s;
  s.reserve(dags.size());
  for (auto& g : dags) s.push_back({std::move(g), p});
  return EnumeratedPrior(std::move(s));
}

EnumeratedPrior EnumeratedPrior::sample_average(int d, const WeightLaw& law, int draws, Rng& rng,
                                                int max_d) {
  if (draws < 1) throw ValidationError("sample_average: draws must be >= 1");
  validate_weight_law(law);
  const auto skeletons = enumerate_dags(d, {1.0}, max_d);
  std::vector<WeightedStructure> s;
  for (const auto& g : skeletons) {
    const int reps = g.edge_count() == 0 ? 1 : draws;
    const double p = 1.0 / (static_cast<double>(skeletons.size()) * reps);
    for (int r = 0; r < reps; ++r) {
      Matrix a = g.weights();
      for (Eigen::Index k = 0; k < a.size(); ++k)
        if (a(k) != 0.0) a(k) = sample_weight(law, rng);
      s.push_back({WeightedDag(std::move(a)), p});
    }
  }
  return EnumeratedPrior(std::move(s));
}

std::size_t EnumeratedPrior::pair_index(int i, int j) const {
  if (i == j || i < 0 || j < 0 || i >= d_ || j >= d_) {
    throw ValidationError("EnumeratedPrior: invalid vertex pair");
  }
  if (i > j) std::swap(i, j);
  // Row-major index of (i, j) among pairs with i < j.
  return static_cast<std::size_t>(i) * (2 * d_ - i - 1) / 2 + (j - i - 1);
}

double EnumeratedPrior::null_mass(int i, int j) const { return null_mass_[pair_index(i, j)]; }
double EnumeratedPrior::edge_mass(int i, int j) const { return 1.0 - null_mass(i, j); }
double EnumeratedPrior::w_plus(int i, int j) const { return w_plus_[pair_index(i, j)]; }
double EnumeratedPrior::w_minus(int i, int j) const { return w_minus_[pair_index(i, j)]; }

WeightedDag EnumeratedPrior::sample(Rng& rng) const {
  std::vector<double> p;
  p.reserve(structures_.size());
  for (const auto& s : structures_) p.push_back(s.probability);
  std::discrete_distribution<std::size_t> pick(p.begin(), p.end());
  return structures_[pick(rng)].dag;
}

GaussianComponent GaussianComponent::from_covariance(double weight, const Matrix& covariance) {
  if (!(weight > 0.0)) throw ValidationError("GaussianComponent: weight must be positive");
  Eigen::LLT<Matrix> llt(covariance);
  if (llt.info() != Eigen::Success) {
    throw ValidationError("GaussianComponent: covariance is not positive definite");
  }
  GaussianComponent c;
  c.log_weight = std::log(weight);
  c.covariance = covariance;
  c.cholesky = llt.matrixL();
  c.precision = llt.solve(Matrix::Identity(covariance.rows(), covariance.cols()));
  c.log_det = 2.0 * c.cholesky.diagonal().array().log().sum();
  return c;
}

double GaussianMixture::log_density_from_scatter(const Matrix& scatter, int n) const {
  if (components.empty()) throw ValidationError("GaussianMixture: no components");
  const double log2pi = std::log(2.0 * std::numbers::pi);
  std::vector<double> terms;
  terms.reserve(components.size());
  for (const auto& c : components) {
    const double quad = c.precision.cwiseProduct(scatter).sum();
    terms.push_back(c.log_weight - 0.5 * n * (dim * log2pi + c.log_det) - 0.5 * quad);
  }
  return log_sum_exp(terms);
}

double GaussianMixture::log_density(const Matrix& x) const {
  if (x.cols() != dim) throw ValidationError("GaussianMixture: dimension mismatch");
  return log_density_from_scatter(x.transpose() * x, static_cast<int>(x.rows()));
}

Matrix GaussianMixture::sample(int n, Rng& rng) const {
  if (components.empty()) throw ValidationError("GaussianMixture: no components");
  std::size_t pick = 0;
  if (components.size() > 1) {
    std::vector<double> w;
    w.reserve(components.size());
    for (const auto& c : components) w.push_back(std::exp(c.log_weight));
    std::discrete_distribution<std::size_t> dist(w.begin(), w.end());
    pick = dist(rng);
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix z(n, dim);
  for (int k = 0; k < n; ++k)
    for (int v = 0; v < dim; ++v) z(k, v) = normal(rng);
  return z * components[pick].cholesky.transpose();
}

double EdgeLikelihoodModel::log_weight_factor() const {
  return std::log(w_minus) - std::log(w_plus);
}

std::vector<EdgeLikelihoodModel> build_edge_models(const EnumeratedPrior& prior, double noise_var,
                                                   int n) {
  if (!(noise_var > 0.0)) throw ValidationError("build_edge_models: noise variance must be positive");
  if (n < 1) throw ValidationError("build_edge_models: n must be >= 1");
  const int d = prior.dim();
  std::vector<Matrix> covariances;
  std::vector<SupportMatrix> supports;
  for (const auto& s : prior.structures()) {
    covariances.push_back(population_covariance(s.dag, noise_var));
    supports.push_back(support_of(s.dag));
  }
  std::vector<EdgeLikelihoodModel> models;
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      EdgeLikelihoodModel m;
      m.i = i;
      m.j = j;
      m.n = n;
      m.noise_var = noise_var;
      m.null_law.dim = d;
      m.alt_law.dim = d;
      m.w_plus = prior.w_plus(i, j);
      m.w_minus = prior.w_minus(i, j);
      const double null_mass = prior.null_mass(i, j);
      const double alt_mass = prior.edge_mass(i, j);
      const auto& structures = prior.structures();
      for (std::size_t k = 0; k < structures.size(); ++k) {
        const double p = structures[k].probability;
        if (p <= 0.0) continue;
        if (supports[k].edge(i, j)) {
          m.alt_law.components.push_back(GaussianComponent::from_covariance(p / alt_mass, covariances[k]));
        } else {
          m.null_law.components.push_back(
              GaussianComponent::from_covariance(p / null_mass, covariances[k]));
        }
      }
      models.push_back(std::move(m));
    }
  }
  return models;
}

double log_likelihood_ratio(const EdgeLikelihoodModel& model, const Matrix& x) {
  if (model.degenerate()) throw ValidationError("log_likelihood_ratio: degenerate pair model");
  const Matrix s = x.transpose() * x;
  const int n = static_cast<int>(x.rows());
  return model.null_law.log_density_from_scatter(s, n) - model.alt_law.log_density_from_scatter(s, n);
}

double log_likelihood_ratio(const EdgeLikelihoodModel& model, const Dataset& data) {
  return log_likelihood_ratio(model, data.values());
}

double CalibratedDetector::gamma() const { return std::exp(log_gamma); }

namespace {

// Detection statistic: declare an edge when it falls below log gamma.
double statistic(const EdgeLikelihoodModel& m, const Matrix& x) {
  return log_likelihood_ratio(m, x) - m.log_weight_factor();
}

bool participates(const EdgeLikelihoodModel& m) {
  return !m.degenerate() && m.w_plus > 0.0 && m.w_minus > 0.0;
}

std::vector<double> draw_statistics(const EdgeLikelihoodModel& m, const GaussianMixture& law,
                                    std::size_t count, const StreamFactory& streams) {
  std::vector<double> out(count);
  const auto total = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < total; ++k) {
    Rng rng = streams.stream("draw", static_cast<std::uint64_t>(k));
    out[static_cast<std::size_t>(k)] = statistic(m, law.sample(m.n, rng));
  }
  return out;
}

}  // namespace

CalibratedDetector calibrate(const std::vector<EdgeLikelihoodModel>& models, double epsilon,
                             std::size_t mc_samples, std::uint64_t seed) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ValidationError("calibrate: epsilon must lie in (0, 1)");
  if (mc_samples < 1) throw ValidationError("calibrate: mc_samples must be >= 1");
  CalibratedDetector det;
  det.epsilon = epsilon;
  det.mc_samples = mc_samples;
  det.seed = seed;

  const StreamFactory root(seed);
  std::vector<std::pair<double, double>> pooled;  // (statistic, weight)
  double max_atom = 0.0;
  for (std::size_t k = 0; k < models.size(); ++k) {
    const auto& m = models[k];
    if (!participates(m)) continue;
    const double w = m.w_plus / static_cast<double>(mc_samples);
    max_atom = std::max(max_atom, w);
    for (double s : draw_statistics(m, m.null_law, mc_samples, root.child("calibrate-null", k)))
      pooled.emplace_back(s, w);
  }
  std::sort(pooled.begin(), pooled.end());

  if (max_atom > 0.1 * epsilon) {
    det.warnings.push_back("mc_samples too small for the requested epsilon resolution: one draw carries " +
                           std::to_string(max_atom) + " of false-positive mass");
  }

  // Largest t with weight{s < t} <= epsilon is the first value whose inclusion
  // would push the strict-below mass past epsilon.
  double below = 0.0;
  std::size_t k = 0;
  while (k < pooled.size()) {
    std::size_t end = k;
    double group = 0.0;
    while (end < pooled.size() && pooled[end].first == pooled[k].first) group += pooled[end++].second;
    if (below + group > epsilon) {
      det.log_gamma = pooled[k].first;
      if (end - k > 1) {
        // Genuine atom: randomize so the boundary contributes exactly epsilon - below.
        det.boundary_mass = group;
        det.eta = 1.0 - (epsilon - below) / group;
      }
      det.estimated_eps_plus = below + (1.0 - det.eta) * det.boundary_mass;
      return det;
    }
    below += group;
    k = end;
  }
  det.log_gamma = kInf;
  det.estimated_eps_plus = below;
  return det;
}

SupportMatrix detect(const std::vector<EdgeLikelihoodModel>& models,
                     const CalibratedDetector& detector, const Dataset& data, Rng& rng) {
  if (models.empty()) throw ValidationError("detect: no pair models");
  const int d = models.front().null_law.dim;
  if (data.dim() != d) throw ValidationError("detect: dataset dimension does not match the models");
  SupportMatrix out(d);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const auto& m : models) {
    bool edge = false;
    if (m.null_law.empty()) {
      edge = true;
    } else if (m.alt_law.empty()) {
      edge = false;
    } else {
      const double s = statistic(m, data.values());
      if (s < detector.log_gamma) edge = true;
      else if (s > detector.log_gamma) edge = false;
      else edge = !(unit(rng) <= detector.eta);
    }
    out.set_edge(m.i, m.j, edge);
  }
  return out;
}

DetectorRates evaluate_detector(const std::vector<EdgeLikelihoodModel>& models, double log_gamma,
                                double eta, std::size_t mc_samples, std::uint64_t seed) {
  if (mc_samples < 1) throw ValidationError("evaluate_detector: mc_samples must be >= 1");
  const StreamFactory root(seed);
  DetectorRates r;
  r.samples_per_pair = mc_samples;
  double var_plus = 0.0;
  double var_minus = 0.0;
  const double m_count = static_cast<double>(mc_samples);
  for (std::size_t k = 0; k < models.size(); ++k) {
    const auto& m = models[k];
    // Prob. of declaring an edge, with the boundary handled in expectation.
    auto declare_edge = [&](double s) { return s < log_gamma ? 1.0 : (s > log_gamma ? 0.0 : 1.0 - eta); };
    if (m.w_plus > 0.0 && !m.null_law.empty()) {
      double fp = 0.0;
      if (!m.alt_law.empty()) {
        for (double s : draw_statistics(m, m.null_law, mc_samples, root.child("eval-null", k)))
          fp += declare_edge(s);
      } else {
        fp = 0.0;
      }
      const double p = fp / m_count;
      r.eps_plus += m.w_plus * p;
      var_plus += m.w_plus * m.w_plus * p * (1.0 - p) / m_count;
    }
    if (m.w_minus > 0.0 && !m.alt_law.empty()) {
      double fn = 0.0;
      if (!m.null_law.empty()) {
        for (double s : draw_statistics(m, m.alt_law, mc_samples, root.child("eval-alt", k)))
          fn += 1.0 - declare_edge(s);
      }
      const double q = fn / m_count;
      r.eps_minus += m.w_minus * q;
      var_minus += m.w_minus * m.w_minus * q * (1.0 - q) / m_count;
    }
  }
  r.se_plus = std::sqrt(var_plus);
  r.se_minus = std::sqrt(var_minus);
  return r;
}

}  // namespace npcd
