#include "npcd/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "npcd/errors.hpp"
#include "npcd/parallel.hpp"

namespace npcd {

namespace {

void check_open_lambda(double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw ValidationError("lambda must lie in (0, 1)");
}

// log dP/dQ for `count` draws of n observations under Q.
std::vector<double> log_ratios_under_q(const GaussianMixture& p, const GaussianMixture& q, int n,
                                       std::size_t count, std::uint64_t seed) {
  if (p.dim != q.dim) throw ValidationError("divergence: laws have different dimensions");
  if (p.empty() || q.empty()) throw ValidationError("divergence: empty mixture");
  if (count < 2) throw ValidationError("divergence: need at least two Monte-Carlo draws");
  const StreamFactory streams(seed);
  std::vector<double> out(count);
  const auto total = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < total; ++k) {
    Rng rng = streams.stream("q-draw", static_cast<std::uint64_t>(k));
    const Matrix x = q.sample(n, rng);
    const Matrix s = x.transpose() * x;
    out[static_cast<std::size_t>(k)] =
        p.log_density_from_scatter(s, n) - q.log_density_from_scatter(s, n);
  }
  return out;
}

DivergenceTriple triple_from_log_ratios(const std::vector<double>& l, double lambda) {
  const double m = static_cast<double>(l.size());
  double top = -std::numeric_limits<double>::infinity();
  for (double v : l) top = std::max(top, lambda * v);

  double sw = 0.0, sw2 = 0.0, swl = 0.0;
  for (double v : l) {
    const double w = std::exp(lambda * v - top);
    sw += w;
    sw2 += w * w;
    swl += w * v;
  }
  DivergenceTriple t;
  t.lambda = lambda;
  t.samples = l.size();
  t.d_lambda = (top + std::log(sw / m)) / (lambda - 1.0);
  t.d_prime = swl / sw;

  double second = 0.0;
  for (double v : l) second += std::exp(lambda * v - top) * (v - t.d_prime) * (v - t.d_prime);
  t.d_double_prime = std::max(0.0, second / sw);

  // Delta-method standard errors for the plain and self-normalized estimators.
  const double mean_w = sw / m;
  const double var_w = std::max(0.0, sw2 / m - mean_w * mean_w);
  t.se_d_lambda = std::sqrt(var_w / m) / mean_w / std::abs(lambda - 1.0);
  double acc1 = 0.0, acc2 = 0.0;
  for (double v : l) {
    const double w = std::exp(lambda * v - top);
    const double c = v - t.d_prime;
    acc1 += w * w * c * c;
    acc2 += w * w * (c * c - t.d_double_prime) * (c * c - t.d_double_prime);
  }
  t.se_d_prime = std::sqrt(acc1) / sw;
  t.se_d_double_prime = std::sqrt(acc2) / sw;
  t.effective_sample_size = sw * sw / sw2;
  t.low_ess = t.effective_sample_size < std::max(50.0, m / 100.0);
  return t;
}

}  // namespace

DivergenceEstimate renyi_divergence(const GaussianMixture& p, const GaussianMixture& q, int n,
                                    double lambda, std::size_t mc_samples, std::uint64_t seed) {
  check_open_lambda(lambda);
  const auto t = triple_from_log_ratios(log_ratios_under_q(p, q, n, mc_samples, seed), lambda);
  return {t.d_lambda, t.se_d_lambda, mc_samples, seed};
}

DivergenceTriple tilted_moments(const GaussianMixture& p, const GaussianMixture& q, int n,
                                double lambda, std::size_t mc_samples, std::uint64_t seed) {
  check_open_lambda(lambda);
  auto t = triple_from_log_ratios(log_ratios_under_q(p, q, n, mc_samples, seed), lambda);
  t.seed = seed;
  return t;
}

double achievability_bound(const std::vector<PairBoundTerm>& pairs, double log_gamma,
                           double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ValidationError("lambda must lie in [0, 1]");
  double total = 0.0;
  for (const auto& pr : pairs) {
    if (pr.w_minus <= 0.0) continue;
    // lambda = 0 must not touch log(w+) or log gamma.
    double log_term = (1.0 - lambda) * std::log(pr.w_minus) -
                      (1.0 - lambda) * pr.divergences.d_lambda;
    if (lambda > 0.0) log_term += lambda * (std::log(pr.w_plus) - log_gamma);
    total += std::exp(log_term);
  }
  return total;
}

double converse_bound(const std::vector<PairBoundTerm>& pairs, double epsilon, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ValidationError("lambda must lie in [0, 1]");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ValidationError("epsilon must lie in (0, 1)");
  double sum = 0.0;
  double worst = 0.0;
  for (const auto& pr : pairs) {
    const auto& dv = pr.divergences;
    const double spread = std::sqrt(2.0 * std::max(0.0, dv.d_double_prime));
    if (pr.w_minus > 0.0) {
      sum += pr.w_minus *
             std::exp(-(1.0 - lambda) * dv.d_lambda - lambda * dv.d_prime - lambda * spread);
    }
    if (pr.w_plus > 0.0) {
      worst = std::max(worst, pr.w_minus / pr.w_plus *
                                  std::exp(-dv.d_prime + (1.0 - 2.0 * lambda) * spread));
    }
  }
  return 0.5 * sum - epsilon * worst;
}

std::vector<double> default_lambda_grid() {
  std::vector<double> grid;
  for (int k = 1; k <= 19; ++k) grid.push_back(0.05 * k);
  return grid;
}

namespace {

template <typename Bound>
double perturbation_se(std::vector<PairBoundTerm> pairs, Bound&& bound) {
  const double base = bound(pairs);
  double var = 0.0;
  auto shift = [&](auto member, auto se_member) {
    auto moved = pairs;
    for (auto& pr : moved) pr.divergences.*member += pr.divergences.*se_member;
    const double delta = bound(moved) - base;
    var += delta * delta;
  };
  shift(&DivergenceTriple::d_lambda, &DivergenceTriple::se_d_lambda);
  shift(&DivergenceTriple::d_prime, &DivergenceTriple::se_d_prime);
  shift(&DivergenceTriple::d_double_prime, &DivergenceTriple::se_d_double_prime);
  return std::sqrt(var);
}

}  // namespace

BoundsReport compute_bounds(const std::vector<EdgeLikelihoodModel>& models, double log_gamma,
                            double epsilon, const std::vector<double>& lambda_grid,
                            std::size_t mc_samples, std::uint64_t seed) {
  if (lambda_grid.empty()) throw ValidationError("compute_bounds: empty lambda grid");
  for (double l : lambda_grid) check_open_lambda(l);
  const StreamFactory root(seed);

  std::vector<std::vector<double>> ratios(models.size());
  for (std::size_t k = 0; k < models.size(); ++k) {
    const auto& m = models[k];
    if (m.degenerate()) continue;
    ratios[k] = log_ratios_under_q(m.null_law, m.alt_law, m.n, mc_samples,
                                   root.seed_for("pair", k));
  }

  BoundsReport report;
  for (double lambda : lambda_grid) {
    LambdaBounds lb;
    lb.lambda = lambda;
    for (std::size_t k = 0; k < models.size(); ++k) {
      PairBoundTerm term{models[k].w_plus, models[k].w_minus, {}};
      term.divergences.lambda = lambda;
      if (!ratios[k].empty()) {
        term.divergences = triple_from_log_ratios(ratios[k], lambda);
        term.divergences.seed = root.seed_for("pair", k);
      }
      lb.pairs.push_back(term);
    }
    lb.achievability = achievability_bound(lb.pairs, log_gamma, lambda);
    lb.converse = converse_bound(lb.pairs, epsilon, lambda);
    lb.achievability_se = perturbation_se(
        lb.pairs, [&](const auto& p) { return achievability_bound(p, log_gamma, lambda); });
    lb.converse_se =
        perturbation_se(lb.pairs, [&](const auto& p) { return converse_bound(p, epsilon, lambda); });
    report.per_lambda.push_back(std::move(lb));
  }
  for (std::size_t k = 1; k < report.per_lambda.size(); ++k) {
    if (report.per_lambda[k].achievability < report.per_lambda[report.best_achievability].achievability)
      report.best_achievability = k;
    if (report.per_lambda[k].converse > report.per_lambda[report.best_converse].converse)
      report.best_converse = k;
  }
  return report;
}

}  // namespace npcd
