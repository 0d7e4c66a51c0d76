#pragma once

#include <cstdint>
#include <vector>

#include "npcd/graph.hpp"

namespace npcd {

// Regularized lower incomplete gamma P(a, x); series below x = a + 1,
// Lentz continued fraction above.
double regularized_gamma_p(double a, double x);
// Q(a, x) = 1 - P(a, x), computed directly so upper tails keep relative accuracy.
double regularized_gamma_q(double a, double x);

/// P(chi^2_df <= x). Zero for x <= 0. Throws ValidationError for df < 1.
double chi_squared_cdf(double x, int df);
/// P(chi^2_df > x).
double chi_squared_sf(double x, int df);
/// Smallest x with chi_squared_cdf(x, df) >= prob, by bisection.
double chi_squared_quantile(double prob, int df);

struct RegressionResult {
  Vector coefficients;
  double rss = 0.0;
  int p = 0;
};

/// Minimum-norm least squares via a complete orthogonal decomposition.
/// A design with zero columns yields rss = sum of squared targets.
RegressionResult least_squares(const Matrix& design, const Vector& target);

struct ThresholdSpec {
  int n = 0;
  int p = 0;
  int q = 0;
  double noise_var = 1.0;
  double epsilon = 0.0;
  double tau_prime = 0.0;
  double tau = 0.0;
  double residual = 0.0;  // |bound(tau_prime) - epsilon|
};

/// Two-sided chi-square tail bound for a residual gap test with parent-set
/// sizes p and q:
///   2 - F_{n-p}(t + n - p) + F_{n-p}(-t + n - p) - F_{n-q}(t + n - q) + F_{n-q}(-t + n - q)
/// Equals 2 at t = 0 and decreases strictly to 0.
double pairwise_tail_bound(int n, int p, int q, double tau_prime);

/// Single-threshold relaxation: 2[1 - F_n(t + n) + F_{n-d+2}(-t + n - d + 2)].
double single_tail_bound(int n, int d, double tau_prime);

/// Solves pairwise_tail_bound(n, p, q, t) = epsilon for t by bisection and maps
/// back to the residual-gap threshold tau = 2 sigma^2 t + |q - p| sigma^2.
/// Throws ConfigError when n <= max(p, q).
ThresholdSpec solve_threshold(int n, int p, int q, double noise_var, double epsilon);

/// Same for single_tail_bound; tau = 2 sigma^2 t + (d - 2) sigma^2. Needs n > d - 2 >= 0.
ThresholdSpec single_threshold(int n, int d, double noise_var, double epsilon);

}  // namespace npcd
