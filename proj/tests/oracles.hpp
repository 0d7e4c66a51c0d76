#pragma once

// Reference computations that share no code with the library under test.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace oracle {

// P(chi2_df <= x) by adaptive Gauss-Kronrod over the density. The change of
// variable t = u^2 removes the t^(df/2 - 1) endpoint singularity.
inline double chi_squared_cdf(double x, int df) {
  if (x <= 0.0) return 0.0;
  const double k = df;
  const double log_norm = -(k / 2.0) * std::log(2.0) - std::lgamma(k / 2.0);
  auto integrand = [&](double u) {
    if (u == 0.0) return df == 1 ? 2.0 * std::exp(log_norm) : 0.0;
    return 2.0 * std::exp(log_norm + (k - 1.0) * std::log(u) - 0.5 * u * u);
  };
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, std::sqrt(x),
                                                                       20, 1e-15, &err);
}

// Renyi divergence of order lambda between N(0, sp) and N(0, sq).
inline double gaussian_renyi(const Eigen::MatrixXd& sp, const Eigen::MatrixXd& sq, double lambda) {
  const Eigen::MatrixXd mix = lambda * sq + (1.0 - lambda) * sp;
  const double num = std::log(mix.determinant());
  const double den = (1.0 - lambda) * std::log(sp.determinant()) + lambda * std::log(sq.determinant());
  return -(num - den) / (2.0 * (lambda - 1.0));
}

// Mean of log(p/q) under the tilted density p^l q^(1-l), 1-D, by quadrature.
inline double tilted_mean_1d(double var_p, double var_q, double lambda) {
  auto log_p = [&](double x) { return -0.5 * std::log(2 * std::numbers::pi * var_p) - x * x / (2 * var_p); };
  auto log_q = [&](double x) { return -0.5 * std::log(2 * std::numbers::pi * var_q) - x * x / (2 * var_q); };
  auto tilt = [&](double x) { return std::exp(lambda * log_p(x) + (1 - lambda) * log_q(x)); };
  const double inf = std::numeric_limits<double>::infinity();
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double z = GK::integrate(tilt, -inf, inf, 15, 1e-14);
  const double m = GK::integrate([&](double x) { return tilt(x) * (log_p(x) - log_q(x)); }, -inf, inf, 15, 1e-14);
  return m / z;
}

// Explicit (Z^T Z)^{-1} Z^T y.
inline double normal_equations_rss(const Eigen::MatrixXd& z, const Eigen::VectorXd& y) {
  const Eigen::VectorXd beta = (z.transpose() * z).inverse() * (z.transpose() * y);
  return (y - z * beta).squaredNorm();
}

// FISTA with a fixed step 1/L on (1/2n)||y - Z b||^2 + lambda ||b||_1.
inline Eigen::VectorXd lasso_fista(const Eigen::MatrixXd& z, const Eigen::VectorXd& y, double lambda,
                                   int iterations = 200000) {
  const double n = static_cast<double>(y.size());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(z.transpose() * z / n);
  const double step = 1.0 / es.eigenvalues().maxCoeff();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(z.cols()), v = b;
  double t = 1.0;
  for (int it = 0; it < iterations; ++it) {
    const Eigen::VectorXd grad = z.transpose() * (z * v - y) / n;
    Eigen::VectorXd next = v - step * grad;
    for (Eigen::Index j = 0; j < next.size(); ++j) {
      const double a = std::abs(next(j)) - step * lambda;
      next(j) = a > 0 ? std::copysign(a, next(j)) : 0.0;
    }
    const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    v = next + ((t - 1.0) / tn) * (next - b);
    b = next;
    t = tn;
  }
  return b;
}

// Labeled DAGs on d vertices by checking every off-diagonal pattern for a
// cycle with repeated removal of sink-free vertices.
inline long count_dags(int d) {
  const int slots = d * (d - 1);
  long count = 0;
  for (long mask = 0; mask < (1L << slots); ++mask) {
    std::vector<std::vector<int>> adj(d, std::vector<int>(d, 0));
    int b = 0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (i != j) adj[i][j] = (mask >> b++) & 1;
    std::vector<int> alive(d, 1);
    bool removed = true;
    int left = d;
    while (removed) {
      removed = false;
      for (int v = 0; v < d; ++v) {
        if (!alive[v]) continue;
        bool has_in = false;
        for (int u = 0; u < d; ++u) has_in |= alive[u] && adj[u][v];
        if (!has_in) {
          alive[v] = 0;
          --left;
          removed = true;
        }
      }
    }
    count += left == 0;
  }
  return count;
}

// One-sample Kolmogorov-Smirnov statistic against a CDF.
template <typename Cdf>
double ks_statistic(std::vector<double> xs, Cdf&& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double f = cdf(xs[k]);
    d = std::max({d, (k + 1) / n - f, f - k / n});
  }
  return d;
}

// Asymptotic Kolmogorov critical value at level 0.01.
inline double ks_critical_01(std::size_t n) { return 1.6276 / std::sqrt(static_cast<double>(n)); }

}  // namespace oracle
