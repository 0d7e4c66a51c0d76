#include "npcd/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "npcd/errors.hpp"

namespace npcd {

namespace {

constexpr double kEps = 1e-17;
constexpr double kTiny = 1e-300;
constexpr int kMaxIter = 100000;

// log(x^a e^{-x} / Gamma(a))
double log_prefactor(double a, double x) { return -x + a * std::log(x) - std::lgamma(a); }

double gamma_p_series(double a, double x) {
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  for (int i = 0; i < kMaxIter; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(log_prefactor(a, x));
}

double gamma_q_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return std::exp(log_prefactor(a, x)) * h;
}

void check_df(int df) {
  if (df < 1) throw ValidationError("chi-squared: degrees of freedom must be >= 1");
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0)) throw ValidationError("regularized_gamma_p: a must be positive");
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_fraction(a, x);
}

double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0)) throw ValidationError("regularized_gamma_q: a must be positive");
  if (x <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_fraction(a, x);
}

double chi_squared_cdf(double x, int df) {
  check_df(df);
  if (std::isnan(x)) return x;
  return regularized_gamma_p(0.5 * df, 0.5 * x);
}

double chi_squared_sf(double x, int df) {
  check_df(df);
  if (std::isnan(x)) return x;
  return regularized_gamma_q(0.5 * df, 0.5 * x);
}

double chi_squared_quantile(double prob, int df) {
  check_df(df);
  if (!(prob >= 0.0 && prob < 1.0)) throw ValidationError("chi_squared_quantile: prob must be in [0, 1)");
  if (prob == 0.0) return 0.0;
  double lo = 0.0;
  double hi = std::max(1.0, static_cast<double>(df));
  while (chi_squared_cdf(hi, df) < prob) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (chi_squared_cdf(mid, df) < prob) lo = mid;
    else hi = mid;
  }
  return hi;
}

RegressionResult least_squares(const Matrix& design, const Vector& target) {
  if (design.rows() != target.size()) {
    throw ValidationError("least_squares: design has " + std::to_string(design.rows()) +
                          " rows but target has " + std::to_string(target.size()));
  }
  if (target.size() < 1) throw ValidationError("least_squares: need at least one sample");
  RegressionResult out;
  out.p = static_cast<int>(design.cols());
  if (out.p == 0) {
    out.coefficients = Vector(0);
    out.rss = target.squaredNorm();
    return out;
  }
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(design);
  out.coefficients = cod.solve(target);
  out.rss = (target - design * out.coefficients).squaredNorm();
  return out;
}

double pairwise_tail_bound(int n, int p, int q, double t) {
  const int dp = n - p;
  const int dq = n - q;
  // 2 - F(a) - F(b) rewritten with survival functions so small targets keep precision.
  return chi_squared_sf(t + dp, dp) + chi_squared_cdf(-t + dp, dp) +
         chi_squared_sf(t + dq, dq) + chi_squared_cdf(-t + dq, dq);
}

double single_tail_bound(int n, int d, double t) {
  const int m = n - d + 2;
  return 2.0 * (chi_squared_sf(t + n, n) + chi_squared_cdf(-t + m, m));
}

namespace {

template <typename Bound>
double solve_decreasing(Bound&& bound, double epsilon, double* residual) {
  double lo = 0.0;
  double hi = 1.0;
  while (bound(hi) > epsilon) {
    hi *= 2.0;
    if (hi > 1e12) throw ConfigError("threshold bisection failed to bracket the target");
  }
  double best = hi;
  double best_res = std::abs(bound(hi) - epsilon);
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double g = bound(mid);
    const double res = std::abs(g - epsilon);
    if (res < best_res) {
      best_res = res;
      best = mid;
    }
    if (g > epsilon) lo = mid;
    else hi = mid;
  }
  *residual = best_res;
  return best;
}

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ValidationError("epsilon must lie in (0, 1)");
}

void check_noise(double noise_var) {
  if (!(noise_var > 0.0) || !std::isfinite(noise_var))
    throw ValidationError("noise variance must be positive");
}

}  // namespace

ThresholdSpec solve_threshold(int n, int p, int q, double noise_var, double epsilon) {
  check_epsilon(epsilon);
  check_noise(noise_var);
  if (p < 0 || q < 0) throw ValidationError("solve_threshold: negative parent-set size");
  if (n <= std::max(p, q)) {
    throw ConfigError("solve_threshold: need n > max(p, q) for positive degrees of freedom");
  }
  ThresholdSpec s{n, p, q, noise_var, epsilon};
  s.tau_prime = solve_decreasing([&](double t) { return pairwise_tail_bound(n, p, q, t); },
                                 epsilon, &s.residual);
  s.tau = 2.0 * noise_var * s.tau_prime + std::abs(q - p) * noise_var;
  return s;
}

ThresholdSpec single_threshold(int n, int d, double noise_var, double epsilon) {
  check_epsilon(epsilon);
  check_noise(noise_var);
  if (d < 2) throw ValidationError("single_threshold: need d >= 2");
  if (n <= d - 2) throw ConfigError("single_threshold: need n > d - 2");
  ThresholdSpec s{n, 0, d - 2, noise_var, epsilon};
  s.tau_prime = solve_decreasing([&](double t) { return single_tail_bound(n, d, t); }, epsilon,
                                 &s.residual);
  s.tau = 2.0 * noise_var * s.tau_prime + (d - 2) * noise_var;
  return s;
}

}  // namespace npcd
