// Copyright 2026 the hybridlab authors
// SPDX-License-Identifier: Apache-2.0

#include "hybridlab/quantmodel.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

using namespace hybridlab;
using quant::Axis;
using quant::QuantConfig;

namespace {

QuantConfig base_cfg(double eps, double delta_p = 0.4, double C_p = 4.0,
                     double T_p = 16.0) {
  return QuantConfig(0.5, 3.0, 1.0, delta_p, eps, 1.0, C_p, 1.0, T_p);
}

// Reference slope via least squares on (log x, log y).
double fitted_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = xs.size();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double lx = std::log(xs[i]), ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_CASE("config invariants are enforced at construction") {
  CHECK_THROWS_AS(QuantConfig(0.0, 3, 1, 1, 0, 1, 1, 1, 1), std::domain_error);
  CHECK_THROWS_AS(QuantConfig(0.5, 3, 1, 1.5, 0, 1, 1, 1, 1), std::domain_error);
  CHECK_THROWS_AS(QuantConfig(0.5, 3, 1, 1, 1.5, 1, 1, 1, 1), std::domain_error);
  CHECK_THROWS_AS(QuantConfig(0.5, 3, 1, 1, 0, 2, 1, 1, 1), std::domain_error);
  CHECK_THROWS_AS(QuantConfig(0.5, 3, 1, 1, 0, 1, 1, 2, 1), std::domain_error);
}

TEST_CASE("zipf probabilities: leading rank and the zeta(2) special case") {
  CHECK(quant::zipf_prob(1, 0.7) == doctest::Approx(1.0 / quant::zeta(1.7)).epsilon(1e-12));
  const double z2 = std::numbers::pi * std::numbers::pi / 6.0;
  CHECK(quant::zeta(2.0) == doctest::Approx(z2).epsilon(1e-12));
  for (std::uint64_t k : {1ull, 2ull, 10ull, 1000ull}) {
    CHECK(quant::zipf_prob(k, 1.0) ==
          doctest::Approx(1.0 / (z2 * k * k)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(quant::zipf_prob(0, 1.0), std::domain_error);
  CHECK_THROWS_AS(quant::zipf_prob(1, 0.0), std::domain_error);
}

TEST_CASE("direct summation to 1e6 plus an integral tail normalizes to 1") {
  for (double alpha : {0.3, 0.7, 1.0, 2.0}) {
    const double s = alpha + 1.0;
    const double zs = quant::zeta(s);
    double sum = 0.0;
    const std::uint64_t K = 1000000;
    for (std::uint64_t k = 1; k <= K; ++k)
      sum += std::pow(static_cast<double>(k), -s) / zs;
    // Midpoint of the two integral envelopes as the tail estimate.
    const double tail = std::pow(K + 0.5, 1.0 - s) / (s - 1.0) / zs;
    CHECK(sum + tail == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("irreducible loss interpolates between the two reductions") {
  CHECK(quant::irreducible_loss(base_cfg(0.0)) == 2.0);  // L0 - delta
  CHECK(quant::irreducible_loss(QuantConfig(0.5, 3, 1, 0, 1, 1, 1, 1, 1)) == 3.0);
  const QuantConfig cfg(0.5, 3.0, 1.0, 0.4, 0.3, 1, 1, 1, 1);
  CHECK(quant::irreducible_loss(cfg) == doctest::Approx(2.18).epsilon(1e-12));
}

TEST_CASE("closed task law approaches the irreducible loss and hits zeta(2) exactly") {
  const auto cfg = base_cfg(0.25);
  CHECK(quant::loss_closed_tasks(1e12, cfg) ==
        doctest::Approx(quant::irreducible_loss(cfg)).epsilon(1e-5));

  const QuantConfig simple(1.0, 1.0, 1.0, 1.0, 0.0, 1, 1, 1, 1);
  const double z2 = std::numbers::pi * std::numbers::pi / 6.0;
  for (double n : {1.0, 2.0, 50.0}) {
    CHECK(quant::loss_closed_tasks(n, simple) ==
          doctest::Approx((1.0 / z2) / n).epsilon(1e-12));
  }
}

TEST_CASE("task sandwich: closed(n+1) <= exact(n) <= closed(n)") {
  for (double eps : {0.0, 0.3, 1.0}) {
    for (double alpha : {0.3, 0.5, 1.2}) {
      const QuantConfig cfg(alpha, 3.0, 1.0, 0.4, eps, 1, 4, 1, 16);
      for (std::uint64_t n = 1; n <= 10000; n = n < 10 ? n + 1 : n * 3 / 2) {
        const double exact = quant::loss_exact(Axis::tasks, double(n), cfg);
        CHECK(quant::loss_closed_tasks(double(n + 1), cfg) <= exact + 1e-14);
        CHECK(exact <= quant::loss_closed_tasks(double(n), cfg) + 1e-14);
      }
    }
  }
}

TEST_CASE("closed parameter law reduces to the task law at eps=0") {
  const auto cfg = base_cfg(0.0);
  for (double N : {2.0, 10.0, 1e4}) {
    CHECK(quant::loss_closed_params(N, cfg) ==
          doctest::Approx(quant::loss_closed_tasks(N / cfg.C, cfg)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(quant::loss_closed_params(0.5, cfg), std::domain_error);
}

TEST_CASE("with C'=C and delta'=delta the parameter curve is eps-independent") {
  const QuantConfig lo(0.5, 3.0, 1.0, 1.0, 0.1, 2.0, 2.0, 1.0, 1.0);
  const QuantConfig hi(0.5, 3.0, 1.0, 1.0, 0.9, 2.0, 2.0, 1.0, 1.0);
  for (double N : {2.0, 8.0, 1e3, 1e6}) {
    CHECK(quant::loss_closed_params(N, lo) ==
          doctest::Approx(quant::loss_closed_params(N, hi)).epsilon(1e-14));
  }
}

TEST_CASE("closed parameter law stays within the task-law bracket of the exact value") {
  const auto cfg = base_cfg(0.35);
  const double c = cfg.mean_cost();
  for (double N = 2.0 * c; N < 1e6; N *= 3.7) {
    const double exact = quant::loss_exact(Axis::params, N, cfg);
    const auto n = static_cast<std::uint64_t>(N / c);
    const double lo = quant::loss_closed_tasks(double(n + 1), cfg);
    const double hi = quant::loss_closed_tasks(double(n), cfg);
    CHECK(lo <= exact + 1e-14);
    CHECK(exact <= hi + 1e-14);
    CHECK(lo <= quant::loss_closed_params(N, cfg) + 1e-14);
    CHECK(quant::loss_closed_params(N, cfg) <= hi + 1e-14);
  }
}

TEST_CASE("closed token law constants") {
  const auto cfg0 = base_cfg(0.0);
  // At eps=0 the coefficient is delta * T^(alpha/(alpha+1)).
  const double expo = cfg0.alpha / (cfg0.alpha + 1.0);
  const double z = quant::zeta(cfg0.alpha + 1.0);
  for (double D : {10.0, 1e4, 1e8}) {
    const double expected =
        2.0 + cfg0.delta * std::pow(cfg0.T, expo) /
                  (cfg0.alpha * std::pow(z, 1.0 / (cfg0.alpha + 1.0))) *
                  std::pow(D, -expo);
    CHECK(quant::loss_closed_tokens(D, cfg0) == doctest::Approx(expected).epsilon(1e-14));
  }
  CHECK_THROWS_AS(quant::loss_closed_tokens(0.5, cfg0), std::domain_error);

  // Degenerate model: delta'=delta, T'=T makes the curve eps-independent.
  const QuantConfig deg_lo(0.5, 3, 1, 1, 0.1, 1, 1, 2, 2);
  const QuantConfig deg_hi(0.5, 3, 1, 1, 0.8, 1, 1, 2, 2);
  for (double D : {4.0, 100.0, 1e7}) {
    CHECK(quant::loss_closed_tokens(D, deg_lo) ==
          doctest::Approx(quant::loss_closed_tokens(D, deg_hi)).epsilon(1e-14));
  }
}

TEST_CASE("closed token law within 1% of the exact phase summation at large D") {
  // delta' < delta, T' > T.
  const QuantConfig cfg(0.5, 3.0, 1.0, 0.5, 0.3, 1.0, 2.0, 1.0, 8.0);
  for (double D = 1e4 * cfg.T; D <= 1e8; D *= 10.0) {
    const double exact = quant::loss_exact(Axis::tokens, D, cfg);
    const double closed = quant::loss_closed_tokens(D, cfg);
    const double floor = quant::irreducible_loss(cfg);
    CHECK(std::abs(closed - exact) / (exact - floor) < 0.01);
  }
}

TEST_CASE("exact losses at the learning thresholds") {
  const auto cfg = base_cfg(0.4);
  CHECK(quant::loss_exact(Axis::tasks, 0.0, cfg) == doctest::Approx(3.0).epsilon(1e-12));
  // Just below zeta(alpha+1) * T no task is learnable.
  const double first = quant::zeta(cfg.alpha + 1.0) * cfg.T;
  CHECK(quant::loss_exact(Axis::tokens, first * 0.999, cfg) ==
        doctest::Approx(3.0).epsilon(1e-12));
  CHECK(quant::loss_exact(Axis::tokens, first * 1.001, cfg) < 3.0);
}

TEST_CASE("Monte Carlo agrees with expectation mode within three standard errors") {
  const QuantConfig cfg(0.6, 3.0, 1.0, 0.5, 0.35, 1.0, 3.0, 1.0, 9.0);
  double se = 0.0;
  const double d_budget = 5e4;
  const double mc =
      quant::loss_monte_carlo(Axis::tokens, d_budget, cfg, 10000, 11, &se);
  CHECK(std::abs(mc - quant::loss_exact(Axis::tokens, d_budget, cfg)) <= 3.0 * se);

  const double n_budget = 300.0;
  double se_p = 0.0;
  const double mc_p =
      quant::loss_monte_carlo(Axis::params, n_budget, cfg, 20000, 13, &se_p);
  // The exact mode replaces the random cost by its mean; the MC validates the
  // expectation step to within a few standard errors.
  CHECK(std::abs(mc_p - quant::loss_exact(Axis::params, n_budget, cfg)) <= 4.0 * se_p);
}

TEST_CASE("loss strictly decreases as eps decreases for nontrivial configs") {
  // Nontrivial via delta' < delta.
  for (double x : {8.0, 1e3, 1e6}) {
    double prev_tok = -1.0, prev_par = -1.0;
    for (double eps : {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0}) {
      const auto cfg = base_cfg(eps);
      const double tok = quant::loss_closed_tokens(x, cfg);
      const double par = quant::loss_closed_params(x * cfg.mean_cost(), cfg);
      if (prev_tok >= 0) {
        CHECK(tok > prev_tok);
        CHECK(par > prev_par);
      }
      prev_tok = tok;
      prev_par = par;
    }
  }
  // Nontrivial via C' > C and T' > T only.
  for (double x : {8.0, 1e3}) {
    double prev_tok = -1.0, prev_par = -1.0;
    for (double eps : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const QuantConfig cfg(0.5, 3.0, 1.0, 1.0, eps, 1.0, 4.0, 1.0, 16.0);
      const double tok = quant::loss_closed_tokens(x, cfg);
      const double par = quant::loss_closed_params(x * 4.0, cfg);
      if (prev_tok >= 0) {
        CHECK(tok > prev_tok);
        CHECK(par > prev_par);
      }
      prev_tok = tok;
      prev_par = par;
    }
  }
}

TEST_CASE("irreducible loss shifts with eps iff delta' < delta") {
  double prev = -1.0;
  for (double eps : {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}) {
    const double li = quant::irreducible_loss(base_cfg(eps, 0.4));
    if (prev >= 0) CHECK(li > prev);
    prev = li;
  }
  for (double eps : {0.0, 0.3, 0.9}) {
    CHECK(quant::irreducible_loss(base_cfg(eps, 1.0)) ==
          doctest::Approx(2.0).epsilon(1e-14));
  }
}

TEST_CASE("token-curve gaps behave as the model family predicts") {
  // delta'=delta with costlier inexpressible tasks: the gap vanishes with D.
  const QuantConfig same_delta(0.5, 3, 1, 1, 0.4, 1, 4, 1, 16);
  const QuantConfig zero_eps(0.5, 3, 1, 1, 0.0, 1, 4, 1, 16);
  double prev_gap = -1.0;
  for (double D = 1e3; D <= 1e9; D *= 10) {
    const double gap = std::abs(quant::loss_closed_tokens(D, same_delta) -
                                quant::loss_closed_tokens(D, zero_eps));
    if (prev_gap >= 0) CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  CHECK(prev_gap < 1e-3);

  // delta' < delta: the gap converges to eps (delta - delta').
  const QuantConfig lower_delta(0.5, 3, 1, 0.4, 0.4, 1, 4, 1, 16);
  const QuantConfig lower_delta0(0.5, 3, 1, 0.4, 0.0, 1, 4, 1, 16);
  const double target = 0.4 * (1.0 - 0.4);
  const double gap_at_large_d = std::abs(quant::loss_closed_tokens(1e12, lower_delta) -
                                         quant::loss_closed_tokens(1e12, lower_delta0));
  CHECK(gap_at_large_d == doctest::Approx(target).epsilon(1e-3));
}

TEST_CASE("fitted token-axis slope equals -alpha/(alpha+1) for every eps") {
  const double alpha = 0.5;
  for (double eps : {0.0, 0.2, 0.5, 0.8, 1.0}) {
    const QuantConfig cfg(alpha, 3.0, 1.0, 0.5, eps, 1.0, 2.0, 1.0, 8.0);
    std::vector<double> xs, ys;
    const double floor = quant::irreducible_loss(cfg);
    for (double D = 1e6; D <= 1e10; D *= 2.0) {
      xs.push_back(D);
      ys.push_back(quant::loss_exact(Axis::tokens, D, cfg) - floor);
    }
    const double slope = fitted_slope(xs, ys);
    const double expected = -alpha / (alpha + 1.0);
    CHECK(std::abs(slope - expected) / std::abs(expected) < 0.01);
  }
}

TEST_CASE("curve evaluation validates the grid and pairs exact with closed") {
  const auto cfg = base_cfg(0.2);
  const auto curve = quant::evaluate_curve(Axis::tokens, {10.0, 100.0, 1000.0}, cfg);
  CHECK(curve.exact.size() == 3);
  CHECK(curve.closed.size() == 3);
  for (double l : curve.exact) {
    CHECK(l <= cfg.L0 + 1e-12);
    CHECK(l >= quant::irreducible_loss(cfg) - 1e-12);
  }
  CHECK_THROWS_AS(quant::evaluate_curve(Axis::tokens, {10.0, 10.0}, cfg),
                  std::invalid_argument);
}
