#pragma once

#include <optional>
#include <string>

#include "kgeval/sampling.hpp"
#include "kgeval/special_functions.hpp"

namespace kgeval {

enum class Method { wald, wilson, et, hpd };

const char* method_name(Method m);

// A 1-alpha interval for the accuracy. `moe` equals half the reported width
// except for Wald, where it keeps the raw (untruncated) half-width so the
// documented overshoot behavior stays observable in the stopping rule.
struct IntervalEstimate {
  double lower = 0.0;
  double upper = 1.0;
  double moe = 0.5;
  Method method = Method::wald;
  std::optional<BetaParams> prior;  // credible methods only

  double width() const { return upper - lower; }
};

// mu_hat +- z * sqrt(variance), truncated to [0, 1] after construction.
// Zero-variance input yields a zero-width interval.
IntervalEstimate wald(const EstimateWithVariance& est, double alpha);

// Score interval with relocated center and corrected spread; `n_eff` is the
// design-effect-adjusted sample size under cluster sampling.
IntervalEstimate wilson(double mu_hat, double n_eff, double alpha);

// Conjugate update: (a, b) -> (a + tau, b + n - tau). Real-valued counts are
// accepted so effective sizes pass through unrounded.
BetaParams posterior_update(const BetaParams& prior, double tau, double n);

// Equal-tailed credible interval: alpha/2 posterior mass in each tail.
IntervalEstimate et_cri(const BetaParams& posterior, double alpha);

// Highest-posterior-density credible interval: the shortest interval with
// 1-alpha posterior coverage. Monotone posteriors use the closed-form
// one-sided bounds; interior-mode posteriors are solved by a golden-section
// width minimization seeded from the equal-tailed interval and polished to
// the density-balance optimum f(l) = f(u).
IntervalEstimate hpd_cri(const BetaParams& posterior, double alpha);

}  // namespace kgeval
