#include <doctest.h>

#include <cmath>

#include "kgeval/intervals.hpp"
#include "kgeval/random.hpp"
#include "support/oracles.hpp"

using namespace kgeval;

namespace {

BetaParams random_unimodal(Rng& rng, double max_shape = 400.0) {
  return BetaParams{1.0 + rng.unit() * max_shape, 1.0 + rng.unit() * max_shape};
}

double coverage(const IntervalEstimate& e, const BetaParams& post) {
  return beta_cdf(e.upper, post) - beta_cdf(e.lower, post);
}

}  // namespace

TEST_CASE("wald interval: zero variance collapses to a point") {
  const IntervalEstimate e = wald({1.0, 0.0, 30.0, 30.0}, 0.05);
  CHECK(e.lower == 1.0);
  CHECK(e.upper == 1.0);
  CHECK(e.moe == 0.0);

  const IntervalEstimate m = wald({0.5, 0.0, 10.0, 5.0}, 0.20);
  CHECK(m.lower == 0.5);
  CHECK(m.upper == 0.5);
}

TEST_CASE("wald interval derived margin and truncation") {
  const IntervalEstimate e = wald({0.5, 0.25 / 384.0, 384.0, 192.0}, 0.05);
  CHECK(e.moe == doctest::Approx(0.05000949662870115).epsilon(1e-10));
  CHECK(e.lower == doctest::Approx(0.5 - e.moe));

  // Overshoot keeps its raw margin but reports clamped bounds.
  const IntervalEstimate o = wald({0.97, 0.001, 30.0, 29.1}, 0.05);
  CHECK(o.upper == 1.0);
  CHECK(o.moe > 0.5 * o.width());
  CHECK(o.moe == doctest::Approx(1.9599639845400543 * std::sqrt(0.001)).epsilon(1e-12));
}

TEST_CASE("wilson interval reference values") {
  const IntervalEstimate e = wilson(1.0, 30.0, 0.05);
  CHECK(e.lower == doctest::Approx(0.8864866068).epsilon(1e-9));
  CHECK(e.upper == doctest::Approx(1.0).epsilon(1e-12));

  const IntervalEstimate z = wilson(0.0, 10.0, 0.05);
  CHECK(z.lower == doctest::Approx(0.0).scale(1).epsilon(1e-12));
  CHECK(z.upper == doctest::Approx(0.2775327999).epsilon(1e-9));
}

TEST_CASE("wilson converges to wald for large n") {
  const double n = 1e6;
  const IntervalEstimate w = wilson(0.5, n, 0.05);
  const IntervalEstimate a = wald({0.5, 0.25 / n, n, n / 2}, 0.05);
  CHECK(std::fabs(w.lower - a.lower) < 1e-3);
  CHECK(std::fabs(w.upper - a.upper) < 1e-3);
}

TEST_CASE("wilson bounds stay in (0,1) for interior estimates") {
  Rng rng(31);
  for (int i = 0; i < 300; ++i) {
    const double mu = 0.001 + 0.998 * rng.unit();
    const double n = 1.0 + 500.0 * rng.unit();
    const IntervalEstimate e = wilson(mu, n, 0.05);
    CHECK(e.lower > 0.0);
    CHECK(e.upper < 1.0);
    CHECK(e.lower <= e.upper);
  }
  CHECK(wilson(1.0, 30, 0.05).upper == 1.0);
  CHECK(wilson(0.0, 30, 0.05).lower == 0.0);
}

TEST_CASE("posterior_update adds observed counts") {
  const BetaParams u = posterior_update(BetaParams::uniform(), 0, 0);
  CHECK(u.a == 1.0);
  CHECK(u.b == 1.0);

  const BetaParams j = posterior_update(BetaParams::jeffreys(), 7, 10);
  CHECK(j.a == doctest::Approx(7.5));
  CHECK(j.b == doctest::Approx(3.5));

  const BetaParams k = posterior_update(BetaParams::kerman(), 21.4, 25.0);
  CHECK(k.a == doctest::Approx(21.4 + 1.0 / 3.0).epsilon(1e-12));
  CHECK(k.b == doctest::Approx(3.6 + 1.0 / 3.0).epsilon(1e-12));

  CHECK_THROWS_AS(posterior_update(BetaParams::uniform(), 5, 4), std::invalid_argument);
}

TEST_CASE("et interval quantile values") {
  const IntervalEstimate u = et_cri(BetaParams::uniform(), 0.05);
  CHECK(u.lower == doctest::Approx(0.025).epsilon(1e-12));
  CHECK(u.upper == doctest::Approx(0.975).epsilon(1e-12));

  const IntervalEstimate s = et_cri({3, 3}, 0.05);
  CHECK(s.lower + s.upper == doctest::Approx(1.0).epsilon(1e-9));

  const IntervalEstimate e = et_cri({11, 1}, 0.05);
  CHECK(e.lower == doctest::Approx(0.7150858471).epsilon(1e-9));
  CHECK(e.upper == doctest::Approx(0.9977010278).epsilon(1e-9));
}

TEST_CASE("hpd limiting cases use the one-sided closed forms") {
  // All-correct posterior under the uniform prior: [alpha^(1/a), 1].
  const IntervalEstimate inc = hpd_cri({11, 1}, 0.05);
  CHECK(inc.lower == doctest::Approx(0.7615958096).epsilon(1e-9));
  CHECK(inc.upper == 1.0);

  const IntervalEstimate dec = hpd_cri({1, 11}, 0.05);
  CHECK(dec.lower == 0.0);
  CHECK(dec.upper == doctest::Approx(1.0 - 0.7615958096).epsilon(1e-8));

  // Fractional shapes from uninformative priors behave the same way.
  const IntervalEstimate k = hpd_cri({30.0 + 1.0 / 3.0, 1.0 / 3.0}, 0.05);
  CHECK(k.upper == 1.0);
  CHECK(k.lower == doctest::Approx(beta_quantile(0.05, {30.0 + 1.0 / 3.0, 1.0 / 3.0})));

  // Flat posterior falls back to the equal-tailed bounds.
  const IntervalEstimate flat = hpd_cri({1, 1}, 0.10);
  CHECK(flat.lower == doctest::Approx(0.05));
  CHECK(flat.upper == doctest::Approx(0.95));
}

TEST_CASE("hpd interior solution matches the exact density-balance optimum") {
  const IntervalEstimate e = hpd_cri({8, 3}, 0.05);
  CHECK(e.lower == doctest::Approx(0.477571578087).epsilon(5e-7));
  CHECK(e.upper == doctest::Approx(0.953553405767).epsilon(5e-7));
  CHECK(e.width() == doctest::Approx(0.475981827680).epsilon(1e-8));
  CHECK(e.width() < et_cri({8, 3}, 0.05).width());
}

TEST_CASE("hpd interior matches the grid-search oracle") {
  const auto oracle = testing::grid_search_hpd({8, 3}, 0.05, 1e-5, /*refine=*/false);
  const IntervalEstimate e = hpd_cri({8, 3}, 0.05);
  CHECK(std::fabs(e.lower - oracle.lower) < 1e-4);
  CHECK(std::fabs(e.upper - oracle.upper) < 1e-4);

  Rng rng(33);
  for (int i = 0; i < 40; ++i) {
    const BetaParams post = random_unimodal(rng, 60.0);
    const auto g = testing::grid_search_hpd(post, 0.05, 1e-5);
    const IntervalEstimate h = hpd_cri(post, 0.05);
    CHECK(std::fabs(h.lower - g.lower) < 1e-4);
    CHECK(std::fabs(h.upper - g.upper) < 1e-4);
  }
}

TEST_CASE("hpd is never wider than et and has exact coverage") {
  Rng rng(34);
  for (double alpha : {0.1, 0.05, 0.01}) {
    for (int i = 0; i < 400; ++i) {
      const BetaParams post = random_unimodal(rng);
      const IntervalEstimate h = hpd_cri(post, alpha);
      const IntervalEstimate e = et_cri(post, alpha);
      CHECK(h.width() <= e.width() + 1e-9);
      CHECK(std::fabs(coverage(h, post) - (1.0 - alpha)) < 1e-8);
      CHECK(std::fabs(coverage(e, post) - (1.0 - alpha)) < 1e-9);
    }
  }
}

TEST_CASE("hpd equals et for symmetric posteriors") {
  Rng rng(35);
  for (int i = 0; i < 100; ++i) {
    const double k = 1.0 + 300.0 * rng.unit();
    const IntervalEstimate h = hpd_cri({k, k}, 0.05);
    const IntervalEstimate e = et_cri({k, k}, 0.05);
    CHECK(std::fabs(h.lower - e.lower) < 1e-6);
    CHECK(std::fabs(h.upper - e.upper) < 1e-6);
  }
}

TEST_CASE("hpd density balance holds at interior optima") {
  Rng rng(36);
  for (int i = 0; i < 200; ++i) {
    const BetaParams post = random_unimodal(rng);
    const IntervalEstimate h = hpd_cri(post, 0.05);
    if (h.lower <= 0.0 || h.upper >= 1.0) continue;
    const double fl = beta_pdf(h.lower, post);
    const double fu = beta_pdf(h.upper, post);
    const double mode = (post.a - 1.0) / (post.a + post.b - 2.0);
    const double fmax = beta_pdf(mode, post);
    CHECK(std::fabs(fl - fu) <= 1e-6 * fmax);
  }
}

TEST_CASE("monotone-posterior hpd cannot be shortened without losing coverage") {
  const double alpha = 0.05;
  for (const BetaParams post : {BetaParams{30.333, 0.333}, BetaParams{0.5, 25.5}}) {
    const IntervalEstimate h = hpd_cri(post, alpha);
    const double cov = coverage(h, post);
    CHECK(std::fabs(cov - (1.0 - alpha)) < 1e-8);
    for (double delta : {1e-3, 1e-2}) {
      if (h.lower == 0.0) {
        // Decreasing posterior: any same-width interval shifted right loses mass.
        const double cov_shift = beta_cdf(std::min(1.0, h.upper + delta), post) -
                                 beta_cdf(delta, post);
        CHECK(cov_shift < cov);
        // Equal coverage forced elsewhere costs width.
        const double u2 = beta_quantile(std::min(1.0, beta_cdf(delta, post) + 1.0 - alpha), post);
        CHECK(u2 - delta > h.width());
      } else {
        const double cov_shift = beta_cdf(1.0 - delta, post) -
                                 beta_cdf(std::max(0.0, h.lower - delta), post);
        CHECK(cov_shift < cov);
        const double u2 = 1.0 - delta;
        const double l2 = beta_quantile(beta_cdf(u2, post) - (1.0 - alpha), post);
        CHECK(u2 - l2 > h.width());
      }
    }
  }
}

TEST_CASE("interval moe equals half the width for non-wald methods") {
  Rng rng(37);
  for (int i = 0; i < 100; ++i) {
    const BetaParams post = random_unimodal(rng);
    const IntervalEstimate h = hpd_cri(post, 0.05);
    CHECK(h.moe == doctest::Approx(0.5 * h.width()).epsilon(1e-12));
    const IntervalEstimate w = wilson(rng.unit(), 5.0 + 100.0 * rng.unit(), 0.05);
    CHECK(w.moe == doctest::Approx(0.5 * w.width()).epsilon(1e-12));
  }
}
