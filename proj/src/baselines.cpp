#include "npcd/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <numeric>
#include <span>
#include <string>

#include "npcd/errors.hpp"
#include "npcd/parallel.hpp"
#include "npcd/residual_table.hpp"
#include "npcd/stats.hpp"

namespace npcd {

Matrix empirical_covariance(const Dataset& data) {
  return data.scatter() / static_cast<double>(data.samples());
}

double dag_log_likelihood(const WeightedDag& dag, const Matrix& emp_cov, int n, double noise_var) {
  const int d = dag.size();
  if (emp_cov.rows() != d || emp_cov.cols() != d) {
    throw ValidationError("dag_log_likelihood: covariance size does not match the DAG");
  }
  if (n < 1) throw ValidationError("dag_log_likelihood: n must be >= 1");
  if (!(noise_var > 0.0)) throw ValidationError("dag_log_likelihood: noise variance must be positive");
  const Matrix b = Matrix::Identity(d, d) - dag.weights();
  const double trace = (b.transpose() * b * emp_cov).trace();
  return -0.5 * n * d * std::log(2.0 * std::numbers::pi * noise_var) -
         0.5 * n / noise_var * trace;
}

namespace {

void check_ordering_size(int d, int max_d) {
  if (d > max_d) {
    throw CapacityError("ordering search: d = " + std::to_string(d) + " exceeds the cap " +
                        std::to_string(max_d));
  }
}

struct PartialSearch {
  std::vector<int> best_order;
  double best_rss = std::numeric_limits<double>::infinity();
  Matrix constrained;
};

// All orderings that start with `first`.
PartialSearch search_from(const ResidualTable& table, int d, int first) {
  PartialSearch out;
  out.constrained = Matrix::Constant(d, d, std::numeric_limits<double>::infinity());
  std::vector<int> order;
  order.push_back(first);
  for (int v = 0; v < d; ++v)
    if (v != first) order.push_back(v);

  std::vector<VertexMask> pred(d);
  std::vector<double> term(d);
  do {
    VertexMask seen = 0;
    double total = 0.0;
    for (int k = 0; k < d; ++k) {
      const int v = order[k];
      pred[v] = seen;
      term[v] = table.rss(v, seen);
      total += term[v];
      seen |= VertexMask{1} << v;
    }
    if (total < out.best_rss) {
      out.best_rss = total;
      out.best_order = order;
    }
    for (int ka = 0; ka < d; ++ka) {
      const int a = order[ka];
      for (int kb = ka + 1; kb < d; ++kb) {
        const int b = order[kb];
        const double value = total - term[b] + table.rss(b, pred[b] & ~(VertexMask{1} << a));
        double& slot = out.constrained(std::min(a, b), std::max(a, b));
        slot = std::min(slot, value);
      }
    }
  } while (std::next_permutation(order.begin() + 1, order.end()));
  return out;
}

OrderingSearch merge(std::vector<PartialSearch>& parts, int d) {
  OrderingSearch out;
  out.best_rss = std::numeric_limits<double>::infinity();
  out.constrained_rss = Matrix::Zero(d, d);
  Matrix upper = Matrix::Constant(d, d, std::numeric_limits<double>::infinity());
  // Parts are visited in first-vertex order, so strict < keeps the
  // lexicographically smallest ordering among ties.
  for (auto& p : parts) {
    if (p.best_rss < out.best_rss) {
      out.best_rss = p.best_rss;
      out.best_order = p.best_order;
    }
    upper = upper.cwiseMin(p.constrained);
  }
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      out.constrained_rss(i, j) = upper(i, j);
      out.constrained_rss(j, i) = upper(i, j);
    }
  return out;
}

OrderingSearch search_impl(const Dataset& data, int max_d, bool parallel) {
  const int d = data.dim();
  check_ordering_size(d, max_d);
  if (d == 1) {
    OrderingSearch out;
    out.best_order = {0};
    out.best_rss = data.column(0).squaredNorm();
    out.constrained_rss = Matrix::Zero(1, 1);
    return out;
  }
  const ResidualTable table =
      parallel ? ResidualTable::build(data, d - 1) : ResidualTable::build_serial(data, d - 1);
  std::vector<PartialSearch> parts(d);
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int first = 0; first < d; ++first) parts[first] = search_from(table, d, first);
  } else {
    for (int first = 0; first < d; ++first) parts[first] = search_from(table, d, first);
  }
  return merge(parts, d);
}

Matrix statistics_from(const OrderingSearch& search, double noise_var) {
  const int d = static_cast<int>(search.constrained_rss.rows());
  Matrix lambda = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      const double v = std::max(0.0, (search.constrained_rss(i, j) - search.best_rss) / noise_var);
      lambda(i, j) = v;
      lambda(j, i) = v;
    }
  return lambda;
}

}  // namespace

OrderingSearch search_orderings(const Dataset& data, int max_d) {
  return search_impl(data, max_d, true);
}

OrderingSearch search_orderings_serial(const Dataset& data, int max_d) {
  return search_impl(data, max_d, false);
}

WeightedDag fit_ordering(const Dataset& data, const std::vector<int>& order) {
  const int d = data.dim();
  if (static_cast<int>(order.size()) != d) throw ValidationError("fit_ordering: size mismatch");
  Matrix a = Matrix::Zero(d, d);
  for (int k = 1; k < d; ++k) {
    const std::span<const int> preds(order.data(), static_cast<std::size_t>(k));
    const auto fit = least_squares(select_columns(data, preds), data.column(order[k]));
    for (int m = 0; m < k; ++m) a(order[k], order[m]) = fit.coefficients(m);
  }
  return WeightedDag(std::move(a));
}

void GlrtConfig::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ValidationError("glrt: epsilon must lie in (0, 1)");
  if (!(noise_var > 0.0) || !std::isfinite(noise_var))
    throw ValidationError("glrt: noise variance must be positive");
  if (df < 1) throw ValidationError("glrt: df must be >= 1");
  if (mode == GlrtThresholdMode::kMonteCarlo && null_samples < 1)
    throw ValidationError("glrt: need at least one null sample");
  if (max_d < 1) throw ValidationError("glrt: max_d must be >= 1");
}

Matrix glrt_statistics(const OrderingSearch& search, double noise_var) {
  return statistics_from(search, noise_var);
}

Matrix glrt_statistics(const Dataset& data, int max_d) {
  return statistics_from(search_orderings(data, max_d), data.noise_var());
}

double glrt_threshold(const GlrtConfig& config, int d, int n) {
  config.validate();
  check_ordering_size(d, config.max_d);
  if (config.mode == GlrtThresholdMode::kChiSquared) {
    return chi_squared_quantile(1.0 - config.epsilon, config.df);
  }
  const NullModel null_model = config.null_model.value_or(WeightedDag::empty(d));
  if (const auto* spec = std::get_if<PriorSpec>(&null_model)) {
    spec->validate();
    if (spec->d != d) throw ValidationError("glrt: null prior dimension does not match the data");
  } else if (std::get<WeightedDag>(null_model).size() != d) {
    throw ValidationError("glrt: null DAG dimension does not match the data");
  }

  const StreamFactory streams(config.seed);
  const auto count = static_cast<std::ptrdiff_t>(config.null_samples);
  std::vector<std::vector<double>> per_draw(config.null_samples);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t s = 0; s < count; ++s) {
    Rng rng = streams.stream("glrt-null", static_cast<std::uint64_t>(s));
    const WeightedDag truth = std::holds_alternative<PriorSpec>(null_model)
                                  ? sample_prior(std::get<PriorSpec>(null_model), rng)
                                  : std::get<WeightedDag>(null_model);
    const Dataset sample = simulate(truth, n, config.noise_var, rng);
    const Matrix lambda = statistics_from(search_orderings_serial(sample, config.max_d),
                                          config.noise_var);
    const SupportMatrix chi = support_of(truth);
    auto& out = per_draw[static_cast<std::size_t>(s)];
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j)
        if (!chi.edge(i, j)) out.push_back(lambda(i, j));
  }
  std::vector<double> pooled;
  for (const auto& v : per_draw) pooled.insert(pooled.end(), v.begin(), v.end());
  if (pooled.empty()) throw ConfigError("glrt: null model produced no absent pairs");
  std::sort(pooled.begin(), pooled.end());
  const auto total = static_cast<double>(pooled.size());
  auto k = static_cast<std::ptrdiff_t>(std::ceil((1.0 - config.epsilon) * total)) - 1;
  k = std::clamp<std::ptrdiff_t>(k, 0, static_cast<std::ptrdiff_t>(pooled.size()) - 1);
  return pooled[static_cast<std::size_t>(k)];
}

GlrtResult glrt_detect(const Dataset& data, const GlrtConfig& config,
                       std::optional<double> threshold) {
  config.validate();
  const int d = data.dim();
  GlrtResult out{SupportMatrix(d), glrt_statistics(data, config.max_d), 0.0};
  out.threshold = threshold ? *threshold : glrt_threshold(config, d, data.samples());
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (out.statistics(i, j) > out.threshold) out.support.set_edge(i, j, true);
  return out;
}

double lasso_objective(const Matrix& design, const Vector& target, const Vector& coef,
                       double lambda) {
  const double n = static_cast<double>(target.size());
  return (target - design * coef).squaredNorm() / (2.0 * n) + lambda * coef.lpNorm<1>();
}

LassoFit lasso_coordinate_descent(const Matrix& design, const Vector& target, double lambda,
                                  double tol, int max_sweeps) {
  if (design.rows() != target.size()) throw ValidationError("lasso: design/target size mismatch");
  if (target.size() < 1) throw ValidationError("lasso: need at least one sample");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ValidationError("lasso: lambda must be >= 0");
  const double n = static_cast<double>(target.size());
  const Eigen::Index p = design.cols();
  Vector scale(p);
  for (Eigen::Index j = 0; j < p; ++j) scale(j) = design.col(j).squaredNorm() / n;

  LassoFit fit;
  fit.coefficients = Vector::Zero(p);
  Vector r = target;
  for (fit.sweeps = 1; fit.sweeps <= max_sweeps; ++fit.sweeps) {
    double max_change = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (scale(j) == 0.0) continue;
      const double old = fit.coefficients(j);
      const double rho = design.col(j).dot(r) / n + scale(j) * old;
      const double shrunk = std::copysign(std::max(std::abs(rho) - lambda, 0.0), rho);
      const double next = shrunk / scale(j);
      if (next != old) {
        r -= design.col(j) * (next - old);
        fit.coefficients(j) = next;
        max_change = std::max(max_change, std::abs(next - old) * std::sqrt(scale(j)));
      }
    }
    if (max_change < tol) {
      // Dual point theta = s r / n, scaled into the feasible set |Z^T theta|_inf <= lambda.
      const double primal = r.squaredNorm() / (2.0 * n) + lambda * fit.coefficients.lpNorm<1>();
      const double corr = p > 0 ? (design.transpose() * r).lpNorm<Eigen::Infinity>() / n : 0.0;
      const double s = corr > lambda ? lambda / corr : 1.0;
      const Vector theta = r * (s / n);
      const double dual = theta.dot(target) - 0.5 * n * theta.squaredNorm();
      if (primal - dual <= tol * std::max(primal, 1.0)) {
        fit.converged = true;
        break;
      }
    }
  }
  fit.sweeps = std::min(fit.sweeps, max_sweeps);
  fit.objective = lasso_objective(design, target, fit.coefficients, lambda);
  return fit;
}

namespace {

std::vector<int> others(int d, int i) {
  std::vector<int> v;
  for (int k = 0; k < d; ++k)
    if (k != i) v.push_back(k);
  return v;
}

}  // namespace

double lasso_lambda_max(const Dataset& data) {
  // Built exactly like the first coordinate-descent sweep of each node fit,
  // so lambda_max zeroes every fit without rounding slack.
  const double n = static_cast<double>(data.samples());
  double top = 0.0;
  for (int i = 0; i < data.dim(); ++i) {
    const Matrix z = select_columns(data, others(data.dim(), i));
    const Vector y = data.column(i);
    for (Eigen::Index k = 0; k < z.cols(); ++k) top = std::max(top, std::abs(z.col(k).dot(y) / n));
  }
  return top;
}

Matrix lasso_coefficients(const Dataset& data, double lambda, double tol) {
  const int d = data.dim();
  Matrix b = Matrix::Zero(d, d);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < d; ++i) {
    const auto rest = others(d, i);
    const auto fit = lasso_coordinate_descent(select_columns(data, rest), data.column(i), lambda, tol);
    for (std::size_t k = 0; k < rest.size(); ++k) b(i, rest[k]) = fit.coefficients(static_cast<Eigen::Index>(k));
  }
  return b;
}

SupportMatrix lasso_neighborhood(const Dataset& data, double lambda, double tol) {
  const Matrix b = lasso_coefficients(data, lambda, tol);
  const int d = data.dim();
  SupportMatrix s(d);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (b(i, j) != 0.0 || b(j, i) != 0.0) s.set_edge(i, j, true);
  return s;
}

WeightedDag direction_recovery(const Dataset& data, const SupportMatrix& support, int max_d) {
  const int d = data.dim();
  if (support.size() != d) throw ValidationError("direction_recovery: support size mismatch");
  check_ordering_size(d, max_d);
  const WeightedDag ml = fit_ordering(data, search_orderings(data, max_d).best_order);
  Matrix a = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (i != j && support.edge(i, j)) a(i, j) = ml.weights()(i, j);
  return WeightedDag(std::move(a));
}

}  // namespace npcd
