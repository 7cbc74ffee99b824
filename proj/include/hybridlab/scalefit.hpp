// Copyright 2026 the hybridlab authors
// SPDX-License-Identifier: Apache-2.0
//
// Chinchilla-style scaling law L(N, D) = E + A/N^alpha + B/D^beta: fitting by
// Huber loss on log-residuals with multi-start optimization, bootstrap
// confidence intervals, fixed-exponent refits, analytic inversions for token
// requirements, compute-optimal allocation, and savings factors.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hybridlab::scalefit {

struct ScalingPoint {
  double N;  // non-embedding parameters
  double D;  // training tokens
  double L;  // observed loss
};

struct ScalingLawParams {
  double E = 0, A = 0, alpha = 0, B = 0, beta = 0;

  double a_opt() const { return beta / (alpha + beta); }
  double b_opt() const { return 1.0 - a_opt(); }
};

struct FitConfig {
  double huber_delta = 1e-3;   // on log-loss residuals; infinity = least squares
  int bootstrap_n = 1000;
  double ci_level = 0.95;
  std::optional<std::pair<double, double>> fixed_exponents;  // (alpha, beta)
  std::uint64_t seed = 0;
  int multistart_polish = 32;  // local refinements from the best grid starts
};

struct FitResult {
  ScalingLawParams params;
  double r2 = 0;               // on log-loss
  double objective = 0;        // summed Huber loss at the optimum
  std::vector<double> residuals;  // log L - log Lhat per point
  bool degenerate = false;     // A or B pinned at a negligible level
};

struct Interval {
  double lo = 0, hi = 0;
};

struct BootstrapResult {
  FitResult fit;  // fit on the original points
  Interval E, A, alpha, B, beta;
  std::vector<ScalingLawParams> replicates;
};

double predict_loss(const ScalingLawParams& params, double N, double D);

// Huber fit from a multi-start grid over (log E, log A, alpha, log B, beta),
// refined by Nelder-Mead. Requires >= 6 points spanning >= 2 distinct N and D.
FitResult fit_scaling_law(const std::vector<ScalingPoint>& points,
                          const FitConfig& cfg = {});

// Three-parameter fit with alpha, beta pinned.
FitResult fit_fixed_exponents(const std::vector<ScalingPoint>& points, double alpha,
                              double beta, const FitConfig& cfg = {});

// Percentile bootstrap over resampled points; replicates refit from the base
// optimum. Runs replicates in parallel (capped by HYBRIDLAB_THREADS).
BootstrapResult bootstrap_ci(const std::vector<ScalingPoint>& points,
                             const FitConfig& cfg = {});

// D*(N) = (B / (L_target - E - A/N^alpha))^(1/beta).
// Throws std::domain_error when the target is below the loss asymptote.
double tokens_to_target(const ScalingLawParams& params, double N, double L_target);

struct ComputeOptimal {
  double N, D, L;
};

// N* = (C/(6G))^{a_opt}, D* = C/(6 N*) with G = (beta B / (alpha A))^{1/beta}.
ComputeOptimal compute_optimal(const ScalingLawParams& params, double C);

enum class SavingsMode { tokens, params, compute };

// Resource ratio ref/arch needed to reach L_target:
//  - tokens: D_ref(N)/D_arch(N) at fixed N,
//  - params: N_ref(D)/N_arch(D) at fixed D,
//  - compute: min_N 6 N D(N) ratio (scale argument ignored).
double savings_factor(const ScalingLawParams& ref, const ScalingLawParams& arch,
                      SavingsMode mode, double scale, double L_target);

}  // namespace hybridlab::scalefit
