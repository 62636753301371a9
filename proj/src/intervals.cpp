#include "kgeval/intervals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kgeval {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("alpha must be in (0, 1)");
}

IntervalEstimate make_interval(double lower, double upper, Method method) {
  IntervalEstimate e;
  e.lower = lower;
  e.upper = upper;
  e.moe = 0.5 * (upper - lower);
  e.method = method;
  return e;
}

double log_pdf_slope(double x, const BetaParams& p) {
  return (p.a - 1.0) / x - (p.b - 1.0) / (1.0 - x);
}

// Interior-mode case: the width u(l) - l with u(l) = F^-1(F(l) + 1 - alpha)
// is unimodal in l, so a golden-section pass brackets the optimum and a
// Newton polish lands on the density-balance condition f(l) = f(u).
IntervalEstimate hpd_interior(const BetaParams& post, double alpha) {
  const double coverage = 1.0 - alpha;
  const double l_hi = beta_quantile(alpha, post);

  double u_warm = -1.0;
  auto upper_of = [&](double l) {
    const double q = beta_cdf(l, post) + coverage;
    u_warm = beta_quantile(std::min(q, 1.0), post, u_warm);
    return u_warm;
  };
  auto width_of = [&](double l) { return upper_of(l) - l; };

  constexpr double kInvPhi = 0.6180339887498949;
  double a = 0.0, b = l_hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double w1 = width_of(x1);
  double w2 = width_of(x2);
  const double x_tol = std::max(1e-13, 1e-5 * l_hi);
  while (b - a > x_tol) {
    if (w1 <= w2) {
      b = x2;
      x2 = x1;
      w2 = w1;
      x1 = b - kInvPhi * (b - a);
      w1 = width_of(x1);
    } else {
      a = x1;
      x1 = x2;
      w1 = w2;
      x2 = a + kInvPhi * (b - a);
      w2 = width_of(x2);
    }
  }

  double l = 0.5 * (a + b);
  double u = upper_of(l);
  // Newton on g(l) = ln f(l) - ln f(u(l)); g is increasing through the
  // optimum for a unimodal posterior.
  for (int it = 0; it < 20; ++it) {
    if (!(l > 0.0 && u < 1.0)) break;
    const double g = (post.a - 1.0) * (std::log(l) - std::log(u)) +
                     (post.b - 1.0) * (std::log1p(-l) - std::log1p(-u));
    const double ratio = std::exp(g);  // f(l) / f(u)
    const double dg = log_pdf_slope(l, post) - log_pdf_slope(u, post) * ratio;
    if (!(std::fabs(dg) > 0.0) || !std::isfinite(dg)) break;
    double next = l - g / dg;
    if (!(next > 0.0 && next < l_hi)) break;
    if (std::fabs(next - l) < 1e-16 * std::max(l, 1e-12)) {
      l = next;
      u = upper_of(l);
      break;
    }
    l = next;
    u = upper_of(l);
    if (std::fabs(g) < 1e-13) break;
  }
  return make_interval(l, u, Method::hpd);
}

}  // namespace

const char* method_name(Method m) {
  switch (m) {
    case Method::wald: return "wald";
    case Method::wilson: return "wilson";
    case Method::et: return "et";
    case Method::hpd: return "hpd";
  }
  return "?";
}

IntervalEstimate wald(const EstimateWithVariance& est, double alpha) {
  check_alpha(alpha);
  const double z = normal_quantile(1.0 - alpha / 2.0);
  const double half = z * std::sqrt(std::max(est.variance, 0.0));
  IntervalEstimate e = make_interval(std::clamp(est.mu_hat - half, 0.0, 1.0),
                                     std::clamp(est.mu_hat + half, 0.0, 1.0), Method::wald);
  e.moe = half;  // pre-truncation half-width
  return e;
}

IntervalEstimate wilson(double mu_hat, double n_eff, double alpha) {
  check_alpha(alpha);
  if (!(n_eff > 0.0)) throw std::domain_error("wilson requires n_eff > 0");
  if (!(mu_hat >= 0.0 && mu_hat <= 1.0)) throw std::domain_error("mu_hat must be in [0, 1]");
  const double z = normal_quantile(1.0 - alpha / 2.0);
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n_eff;
  const double center = (mu_hat + z2 / (2.0 * n_eff)) / denom;
  const double half =
      z / denom * std::sqrt(mu_hat * (1.0 - mu_hat) / n_eff + z2 / (4.0 * n_eff * n_eff));
  return make_interval(std::clamp(center - half, 0.0, 1.0),
                       std::clamp(center + half, 0.0, 1.0), Method::wilson);
}

BetaParams posterior_update(const BetaParams& prior, double tau, double n) {
  if (!prior.valid()) throw std::domain_error("invalid prior");
  if (!(tau >= 0.0 && tau <= n)) throw std::invalid_argument("need 0 <= tau <= n");
  return BetaParams{prior.a + tau, prior.b + (n - tau)};
}

IntervalEstimate et_cri(const BetaParams& posterior, double alpha) {
  check_alpha(alpha);
  if (!posterior.valid()) throw std::domain_error("invalid posterior");
  const double l = beta_quantile(alpha / 2.0, posterior);
  const double u = beta_quantile(1.0 - alpha / 2.0, posterior);
  IntervalEstimate e = make_interval(l, u, Method::et);
  return e;
}

IntervalEstimate hpd_cri(const BetaParams& posterior, double alpha) {
  check_alpha(alpha);
  if (!posterior.valid()) throw std::domain_error("invalid posterior");
  const double a = posterior.a, b = posterior.b;

  if (a == 1.0 && b == 1.0) {
    // Flat posterior: every width-(1-alpha) interval is optimal; the
    // equal-tailed one is returned for determinism.
    IntervalEstimate e = et_cri(posterior, alpha);
    e.method = Method::hpd;
    return e;
  }
  if (b <= 1.0 && a >= 1.0) {
    // Monotone increasing: highest density at 1.
    return make_interval(beta_quantile(alpha, posterior), 1.0, Method::hpd);
  }
  if (a <= 1.0 && b >= 1.0) {
    // Monotone decreasing: highest density at 0.
    return make_interval(0.0, beta_quantile(1.0 - alpha, posterior), Method::hpd);
  }
  if (a < 1.0 && b < 1.0) {
    // Density diverges at both endpoints; no single highest-density interval
    // exists. Fall back to the equal-tailed interval, which still carries
    // 1-alpha coverage.
    IntervalEstimate e = et_cri(posterior, alpha);
    e.method = Method::hpd;
    return e;
  }
  return hpd_interior(posterior, alpha);
}

}  // namespace kgeval
