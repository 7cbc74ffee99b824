// Copyright 2026 the hybridlab authors
// SPDX-License-Identifier: Apache-2.0

#include "hybridlab/quantmodel.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace hybridlab::quant {

namespace {

// Zipf mass sum_{k=a}^{b} p_k (inclusive), b may be huge.
double mass_range(double s, std::uint64_t a, std::uint64_t b, double zeta_s) {
  if (a > b) return 0.0;
  return (zeta_tail(s, a - 1) - zeta_tail(s, b)) / zeta_s;
}

struct TokenPhases {
  std::uint64_t k_i;  // largest learnable inexpressible rank
  std::uint64_t k_e;  // largest learnable expressible rank
};

TokenPhases token_phases(double D, const QuantConfig& cfg, double zeta_s) {
  // Task k is learnable with D tokens iff D >= T_k / p_k = zeta * k^(a+1) * T_k.
  const double expo = 1.0 / (cfg.alpha + 1.0);
  auto boundary = [&](double threshold) -> std::uint64_t {
    const double x = std::pow(D / (zeta_s * threshold), expo);
    if (x < 1.0) return 0;
    auto k = static_cast<std::uint64_t>(x);
    // Floor in the original inequality, robust to pow rounding.
    while (zeta_s * std::pow(static_cast<double>(k + 1), cfg.alpha + 1.0) *
               threshold <= D)
      ++k;
    while (k > 0 && zeta_s * std::pow(static_cast<double>(k), cfg.alpha + 1.0) *
                        threshold > D)
      --k;
    return k;
  };
  return {boundary(cfg.T_p), boundary(cfg.T)};
}

}  // namespace

QuantConfig::QuantConfig(double alpha_in, double L0_in, double delta_in,
                         double delta_p_in, double eps_in, double C_in, double C_p_in,
                         double T_in, double T_p_in)
    : alpha(alpha_in), L0(L0_in), delta(delta_in), delta_p(delta_p_in), eps(eps_in),
      C(C_in), C_p(C_p_in), T(T_in), T_p(T_p_in) {
  if (!(alpha > 0.0)) throw std::domain_error("quant: alpha must be > 0");
  if (!(delta > 0.0)) throw std::domain_error("quant: delta must be > 0");
  if (!(delta_p >= 0.0 && delta_p <= delta))
    throw std::domain_error("quant: need 0 <= delta_p <= delta");
  if (!(eps >= 0.0 && eps <= 1.0)) throw std::domain_error("quant: eps must be in [0,1]");
  if (!(C > 0.0) || !(T > 0.0)) throw std::domain_error("quant: C, T must be > 0");
  if (!(C_p >= C)) throw std::domain_error("quant: need C_p >= C");
  if (!(T_p >= T)) throw std::domain_error("quant: need T_p >= T");
}

std::string to_string(Axis axis) {
  switch (axis) {
    case Axis::tasks: return "tasks";
    case Axis::params: return "params";
    case Axis::tokens: return "tokens";
  }
  throw std::logic_error("quant: bad axis");
}

Axis axis_from_string(const std::string& name) {
  if (name == "tasks") return Axis::tasks;
  if (name == "params") return Axis::params;
  if (name == "tokens") return Axis::tokens;
  throw std::invalid_argument("quant: unknown axis '" + name + "'");
}

double zeta_tail(double s, std::uint64_t n) {
  if (!(s > 1.0)) throw std::domain_error("quant: zeta tail needs s > 1");
  // Direct terms up to n + J, then Euler-Maclaurin from m = n + J + 1:
  //   sum_{k=m}^inf k^-s = m^(1-s)/(s-1) + m^-s/2 + s m^-(s+1)/12
  //                        - s(s+1)(s+2) m^-(s+3)/720 + ...
  constexpr std::uint64_t J = 32;
  double sum = 0.0;
  for (std::uint64_t k = n + 1; k <= n + J; ++k)
    sum += std::pow(static_cast<double>(k), -s);
  const double m = static_cast<double>(n + J + 1);
  const double ms = std::pow(m, -s);
  double tail = m * ms / (s - 1.0) + ms / 2.0 + s * ms / m / 12.0;
  tail -= s * (s + 1.0) * (s + 2.0) * ms / (m * m * m) / 720.0;
  tail += s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * ms /
          (m * m * m * m * m) / 30240.0;
  return sum + tail;
}

double zeta(double s) { return 1.0 + zeta_tail(s, 1); }

double zipf_prob(std::uint64_t k, double alpha) {
  if (k < 1) throw std::domain_error("quant: rank must be >= 1");
  if (!(alpha > 0.0)) throw std::domain_error("quant: alpha must be > 0");
  const double s = alpha + 1.0;
  return std::pow(static_cast<double>(k), -s) / zeta(s);
}

double irreducible_loss(const QuantConfig& cfg) {
  return cfg.L0 - (1.0 - cfg.eps) * cfg.delta - cfg.eps * cfg.delta_p;
}

double loss_closed_tasks(double n, const QuantConfig& cfg) {
  if (!(n >= 1.0)) throw std::domain_error("quant: closed task law needs n >= 1");
  const double a = irreducible_loss(cfg);
  const double s = cfg.alpha + 1.0;
  return a + (cfg.L0 - a) / (cfg.alpha * zeta(s)) * std::pow(n, -cfg.alpha);
}

double loss_closed_params(double N, const QuantConfig& cfg) {
  const double c = cfg.mean_cost();
  if (!(N >= c))
    throw std::domain_error("quant: N below the mean cost of a single task");
  return loss_closed_tasks(N / c, cfg);
}

double loss_closed_tokens(double D, const QuantConfig& cfg) {
  if (!(D >= cfg.T))
    throw std::domain_error("quant: closed token law needs D >= T");
  const double a = irreducible_loss(cfg);
  const double s = cfg.alpha + 1.0;
  const double expo = cfg.alpha / (cfg.alpha + 1.0);
  const double B_eps = (1.0 - cfg.eps) * cfg.delta * std::pow(cfg.T, expo) +
                       cfg.eps * cfg.delta_p * std::pow(cfg.T_p, expo);
  return a + B_eps / (cfg.alpha * std::pow(zeta(s), 1.0 / (cfg.alpha + 1.0))) *
                 std::pow(D, -expo);
}

double loss_exact(Axis axis, double x, const QuantConfig& cfg) {
  const double s = cfg.alpha + 1.0;
  const double zs = zeta(s);
  switch (axis) {
    case Axis::tasks: {
      if (!(x >= 0.0)) throw std::domain_error("quant: task count must be >= 0");
      const auto n = static_cast<std::uint64_t>(x);
      const double a = irreducible_loss(cfg);
      return a + (cfg.L0 - a) * zeta_tail(s, n) / zs;
    }
    case Axis::params: {
      if (!(x >= 0.0)) throw std::domain_error("quant: params must be >= 0");
      const auto n = static_cast<std::uint64_t>(x / cfg.mean_cost());
      return loss_exact(Axis::tasks, static_cast<double>(n), cfg);
    }
    case Axis::tokens: {
      if (!(x >= 0.0)) throw std::domain_error("quant: tokens must be >= 0");
      const auto [k_i, k_e] = token_phases(x, cfg, zs);
      // Ranks <= k_i are learned regardless of expressibility; ranks in
      // (k_i, k_e] only when expressible; the rest stay unlearned.
      const double a = irreducible_loss(cfg);
      double loss = a * mass_range(s, 1, k_i, zs);
      loss += (cfg.L0 - (1.0 - cfg.eps) * cfg.delta) * mass_range(s, k_i + 1, k_e, zs);
      loss += cfg.L0 * zeta_tail(s, k_e) / zs;
      return loss;
    }
  }
  throw std::logic_error("quant: bad axis");
}

double loss_monte_carlo(Axis axis, double x, const QuantConfig& cfg, int draws,
                        std::uint64_t seed, double* std_error) {
  if (draws < 1) throw std::invalid_argument("quant: draws must be >= 1");
  const double s = cfg.alpha + 1.0;
  const double zs = zeta(s);
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution inexpressible(cfg.eps);

  // Upper bound on the ranks that can possibly be learned.
  std::uint64_t k_max = 0;
  switch (axis) {
    case Axis::tokens: k_max = token_phases(x, cfg, zs).k_e; break;
    case Axis::params: k_max = static_cast<std::uint64_t>(x / cfg.C); break;
    case Axis::tasks: k_max = static_cast<std::uint64_t>(x); break;
  }

  double mean = 0.0, m2 = 0.0;
  for (int d = 0; d < draws; ++d) {
    double loss = cfg.L0;  // start from "nothing learned", subtract reductions
    if (axis == Axis::tokens) {
      for (std::uint64_t k = 1; k <= k_max; ++k) {
        const bool inexpr = inexpressible(rng);
        const double need = zs * std::pow(static_cast<double>(k), s) *
                            (inexpr ? cfg.T_p : cfg.T);
        if (x >= need)
          loss -= (inexpr ? cfg.delta_p : cfg.delta) *
                  std::pow(static_cast<double>(k), -s) / zs;
      }
    } else if (axis == Axis::params) {
      double spent = 0.0;
      for (std::uint64_t k = 1; k <= k_max + 1; ++k) {
        const bool inexpr = inexpressible(rng);
        spent += inexpr ? cfg.C_p : cfg.C;
        if (spent > x) break;
        loss -= (inexpr ? cfg.delta_p : cfg.delta) *
                std::pow(static_cast<double>(k), -s) / zs;
      }
    } else {
      for (std::uint64_t k = 1; k <= k_max; ++k) {
        const bool inexpr = inexpressible(rng);
        loss -= (inexpr ? cfg.delta_p : cfg.delta) *
                std::pow(static_cast<double>(k), -s) / zs;
      }
    }
    const double delta_mean = loss - mean;
    mean += delta_mean / (d + 1);
    m2 += delta_mean * (loss - mean);
  }
  if (std_error) {
    *std_error = draws > 1 ? std::sqrt(m2 / (draws - 1.0) / draws) : 0.0;
  }
  return mean;
}

LossCurve evaluate_curve(Axis axis, const std::vector<double>& grid,
                         const QuantConfig& cfg) {
  LossCurve curve;
  curve.axis = axis;
  curve.grid = grid;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1]))
      throw std::invalid_argument("quant: grid must be strictly increasing");
  }
  curve.exact.reserve(grid.size());
  curve.closed.reserve(grid.size());
  for (double x : grid) {
    curve.exact.push_back(loss_exact(axis, x, cfg));
    switch (axis) {
      case Axis::tasks: curve.closed.push_back(loss_closed_tasks(x, cfg)); break;
      case Axis::params: curve.closed.push_back(loss_closed_params(x, cfg)); break;
      case Axis::tokens: curve.closed.push_back(loss_closed_tokens(x, cfg)); break;
    }
  }
  return curve;
}

}  // namespace hybridlab::quant
