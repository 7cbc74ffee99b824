// Copyright 2026 the hybridlab authors
// SPDX-License-Identifier: Apache-2.0
//
// Expressivity-aware quantization model of scaling laws. Tasks follow a Zipf
// law p_k ∝ k^-(alpha+1); each task is expressible with probability 1-eps.
// Learned expressible tasks reduce loss by delta, inexpressible ones by
// delta_p, at parameter costs C/C_p and sample thresholds T/T_p. The module
// evaluates both the exact expected-loss series and the closed-form power
// laws, on task, parameter, and token axes.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hybridlab::quant {

struct QuantConfig {
  double alpha;    // Zipf exponent, > 0
  double L0;       // base loss on unlearned tasks
  double delta;    // loss reduction, expressible tasks
  double delta_p;  // loss reduction, inexpressible tasks; 0 <= delta_p <= delta
  double eps;      // inexpressibility probability, in [0, 1]
  double C;        // parameter cost, expressible
  double C_p;      // parameter cost, inexpressible; C_p >= C
  double T;        // sample threshold, expressible
  double T_p;      // sample threshold, inexpressible; T_p >= T

  QuantConfig(double alpha, double L0, double delta, double delta_p, double eps,
              double C, double C_p, double T, double T_p);

  double mean_cost() const { return C + eps * (C_p - C); }
};

enum class Axis { tasks, params, tokens };
std::string to_string(Axis axis);
Axis axis_from_string(const std::string& name);

// Tail sum_{k=n+1}^inf k^-s for s > 1, relative error well under 1e-12.
double zeta_tail(double s, std::uint64_t n);
double zeta(double s);

// p_k = k^-(alpha+1) / zeta(alpha+1).
double zipf_prob(std::uint64_t k, double alpha);

// L0 - (1-eps) delta - eps delta_p.
double irreducible_loss(const QuantConfig& cfg);

// Closed forms.
double loss_closed_tasks(double n, const QuantConfig& cfg);
double loss_closed_params(double N, const QuantConfig& cfg);   // requires N >= mean cost
double loss_closed_tokens(double D, const QuantConfig& cfg);   // requires D >= T

// Exact expected loss.
//  - tasks: truncated Zipf series with analytic tail, after learning floor(x) tasks.
//  - params: floor(N / mean-cost) tasks learned, then the exact task series.
//  - tokens: floor-based phase boundaries k_i <= k_e and three-phase summation.
double loss_exact(Axis axis, double x, const QuantConfig& cfg);

// Monte Carlo over per-task expressibility draws, for validating the
// expectation step taken by loss_exact. Returns the mean; *std_error gets the
// standard error of the mean when non-null.
double loss_monte_carlo(Axis axis, double x, const QuantConfig& cfg, int draws,
                        std::uint64_t seed, double* std_error = nullptr);

struct LossCurve {
  Axis axis = Axis::tokens;
  std::vector<double> grid;
  std::vector<double> exact;
  std::vector<double> closed;
};

LossCurve evaluate_curve(Axis axis, const std::vector<double>& grid,
                         const QuantConfig& cfg);

}  // namespace hybridlab::quant
