#pragma once

#include <stdexcept>

namespace kgeval {

// Shape pair of a beta distribution. Serves both as prior and as posterior
// over the unknown accuracy; pseudo-counts may be non-integer.
struct BetaParams {
  double a = 1.0;  // pseudo-count of correct facts
  double b = 1.0;  // pseudo-count of incorrect facts

  bool valid() const { return a > 0.0 && b > 0.0; }
  double mean() const { return a / (a + b); }

  static BetaParams kerman() { return {1.0 / 3.0, 1.0 / 3.0}; }
  static BetaParams jeffreys() { return {0.5, 0.5}; }
  static BetaParams uniform() { return {1.0, 1.0}; }

  friend bool operator==(const BetaParams& x, const BetaParams& y) {
    return x.a == y.a && x.b == y.b;
  }
};

// ln Gamma(x) for x > 0 (Lanczos, g = 7). Throws std::domain_error at x <= 0.
double log_gamma(double x);

// ln B(a, b).
double log_beta(double a, double b);

// Beta density at x in [0, 1]. Diverging endpoint cases (a < 1 at x = 0,
// b < 1 at x = 1) return +infinity.
double beta_pdf(double x, const BetaParams& p);

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation with
// the symmetry switch at x > (a+1)/(a+b+2).
double beta_cdf(double x, const BetaParams& p);

// Inverse of beta_cdf: x with F(x) = q. Safeguarded Newton with a bisection
// fallback; `hint` (if in (0,1)) is used as the starting point.
double beta_quantile(double q, const BetaParams& p, double hint = -1.0);

// Standard normal quantile (Wichura's AS 241 rational approximation).
double normal_quantile(double q);

// Survival function P(T > t) of Student's t with df degrees of freedom.
double student_t_sf(double t, double df);

// Binomial probability mass Bin(k; n, p), evaluated in log space.
double binomial_pmf(int k, int n, double p);

}  // namespace kgeval
