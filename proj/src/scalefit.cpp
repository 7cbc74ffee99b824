// Copyright 2026 the hybridlab authors
// SPDX-License-Identifier: Apache-2.0

#include "hybridlab/scalefit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <random>
#include <set>
#include <stdexcept>

#include "hybridlab/parallel.hpp"

namespace hybridlab::scalefit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double huber(double r, double delta) {
  const double a = std::abs(r);
  if (!std::isfinite(delta)) return 0.5 * r * r;
  return a <= delta ? 0.5 * r * r : delta * (a - 0.5 * delta);
}

// Free fit works on x = (logE, logA, alpha, logB, beta); the fixed-exponent
// fit on x = (logE, logA, logB) with pinned exponents.
struct Objective {
  const std::vector<ScalingPoint>* points;
  double huber_delta;
  std::optional<std::pair<double, double>> fixed;

  ScalingLawParams unpack(const std::vector<double>& x) const {
    ScalingLawParams p;
    if (fixed) {
      p.E = std::exp(x[0]);
      p.A = std::exp(x[1]);
      p.B = std::exp(x[2]);
      p.alpha = fixed->first;
      p.beta = fixed->second;
    } else {
      p.E = std::exp(x[0]);
      p.A = std::exp(x[1]);
      p.alpha = x[2];
      p.B = std::exp(x[3]);
      p.beta = x[4];
    }
    return p;
  }

  std::vector<double> pack(const ScalingLawParams& p) const {
    if (fixed) return {std::log(p.E), std::log(p.A), std::log(p.B)};
    return {std::log(p.E), std::log(p.A), p.alpha, std::log(p.B), p.beta};
  }

  double operator()(const std::vector<double>& x) const {
    const ScalingLawParams p = unpack(x);
    if (!fixed && (p.alpha <= 0.0 || p.alpha > 2.0 || p.beta <= 0.0 || p.beta > 2.0))
      return kInf;
    double total = 0.0;
    for (const auto& pt : *points) {
      const double lhat = predict_loss(p, pt.N, pt.D);
      if (!(lhat > 0.0) || !std::isfinite(lhat)) return kInf;
      total += huber(std::log(pt.L) - std::log(lhat), huber_delta);
    }
    return std::isfinite(total) ? total : kInf;
  }
};

// Standard Nelder-Mead on R^n; returns the best vertex.
std::vector<double> nelder_mead(const Objective& f, std::vector<double> x0,
                                double initial_step, int max_iter) {
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> simplex(n + 1, x0);
  std::vector<double> fx(n + 1);
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += initial_step;
  for (std::size_t i = 0; i <= n; ++i) fx[i] = f(simplex[i]);

  auto order = [&] {
    std::vector<std::size_t> idx(n + 1);
    for (std::size_t i = 0; i <= n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return fx[a] < fx[b]; });
    std::vector<std::vector<double>> s2(n + 1);
    std::vector<double> f2(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      s2[i] = simplex[idx[i]];
      f2[i] = fx[idx[i]];
    }
    simplex.swap(s2);
    fx.swap(f2);
  };

  for (int iter = 0; iter < max_iter; ++iter) {
    order();
    if (std::abs(fx[n] - fx[0]) < 1e-14 * (1.0 + std::abs(fx[0]))) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j] / n;

    auto blend = [&](double t) {
      std::vector<double> x(n);
      for (std::size_t j = 0; j < n; ++j)
        x[j] = centroid[j] + t * (simplex[n][j] - centroid[j]);
      return x;
    };

    const auto reflected = blend(-1.0);
    const double fr = f(reflected);
    if (fr < fx[0]) {
      const auto expanded = blend(-2.0);
      const double fe = f(expanded);
      if (fe < fr) {
        simplex[n] = expanded;
        fx[n] = fe;
      } else {
        simplex[n] = reflected;
        fx[n] = fr;
      }
    } else if (fr < fx[n - 1]) {
      simplex[n] = reflected;
      fx[n] = fr;
    } else {
      const auto contracted = blend(fr < fx[n] ? -0.5 : 0.5);
      const double fc = f(contracted);
      if (fc < std::min(fr, fx[n])) {
        simplex[n] = contracted;
        fx[n] = fc;
      } else {
        for (std::size_t i = 1; i <= n; ++i) {
          for (std::size_t j = 0; j < n; ++j)
            simplex[i][j] = 0.5 * (simplex[i][j] + simplex[0][j]);
          fx[i] = f(simplex[i]);
        }
      }
    }
  }
  order();
  return simplex[0];
}

void check_points(const std::vector<ScalingPoint>& points) {
  if (points.size() < 6)
    throw std::invalid_argument("scalefit: need at least 6 points");
  std::set<double> ns, ds;
  for (const auto& p : points) {
    if (!(p.N > 0.0) || !(p.D > 0.0) || !(p.L > 0.0) || !std::isfinite(p.L))
      throw std::invalid_argument("scalefit: points must be positive and finite");
    ns.insert(p.N);
    ds.insert(p.D);
  }
  if (ns.size() < 2 || ds.size() < 2)
    throw std::invalid_argument(
        "scalefit: degenerate data, need >= 2 distinct N and >= 2 distinct D");
}

FitResult finish_fit(const Objective& obj, const std::vector<double>& x) {
  FitResult res;
  res.params = obj.unpack(x);
  res.objective = obj(x);
  double mean = 0.0;
  for (const auto& p : *obj.points) mean += std::log(p.L);
  mean /= obj.points->size();
  double ss_res = 0.0, ss_tot = 0.0;
  for (const auto& p : *obj.points) {
    const double r = std::log(p.L) - std::log(predict_loss(res.params, p.N, p.D));
    res.residuals.push_back(r);
    ss_res += r * r;
    ss_tot += (std::log(p.L) - mean) * (std::log(p.L) - mean);
  }
  res.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  // Flag fits that pushed a power-law term to irrelevance (constant data).
  const double floor_term = 1e-6 * res.params.E;
  double min_term = kInf;
  for (const auto& p : *obj.points) {
    min_term = std::min(min_term, res.params.A / std::pow(p.N, res.params.alpha));
    min_term = std::min(min_term, res.params.B / std::pow(p.D, res.params.beta));
  }
  res.degenerate = min_term < floor_term;
  return res;
}

std::vector<double> log_space(double lo, double hi, int count) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i)
    out.push_back(std::exp(std::log(lo) +
                           (std::log(hi) - std::log(lo)) * i / std::max(1, count - 1)));
  return out;
}

std::vector<double> lin_space(double lo, double hi, int count) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i)
    out.push_back(lo + (hi - lo) * i / std::max(1, count - 1));
  return out;
}

FitResult fit_impl(const std::vector<ScalingPoint>& points, const FitConfig& cfg,
                   std::optional<std::pair<double, double>> fixed) {
  check_points(points);
  Objective obj{&points, cfg.huber_delta, fixed};

  double min_l = kInf;
  for (const auto& p : points) min_l = std::min(min_l, p.L);

  // Grid of starts: E in [min L / 2, min L], A and B in [1, 500] (log-spaced),
  // exponents in [0.1, 0.5].
  const auto es = log_space(0.5 * min_l, min_l, 6);
  const auto abs_ = log_space(1.0, 500.0, 6);
  const auto exps = lin_space(0.1, 0.5, 5);

  std::vector<std::pair<double, std::vector<double>>> starts;
  for (double e : es) {
    for (double a : abs_) {
      for (double b : abs_) {
        if (fixed) {
          ScalingLawParams p{e, a, fixed->first, b, fixed->second};
          auto x = obj.pack(p);
          starts.emplace_back(obj(x), std::move(x));
        } else {
          for (double al : exps) {
            for (double be : exps) {
              ScalingLawParams p{e, a, al, b, be};
              auto x = obj.pack(p);
              starts.emplace_back(obj(x), std::move(x));
            }
          }
        }
      }
    }
  }
  std::sort(starts.begin(), starts.end(),
            [](const auto& l, const auto& r) { return l.first < r.first; });

  const int polish = std::min<std::size_t>(cfg.multistart_polish, starts.size());
  std::vector<double> best;
  double best_f = kInf;
  for (int i = 0; i < polish; ++i) {
    auto x = nelder_mead(obj, starts[i].second, 0.25, 2000);
    x = nelder_mead(obj, x, 0.02, 2000);  // restart to escape collapsed simplices
    const double fx = obj(x);
    if (fx < best_f) {
      best_f = fx;
      best = x;
    }
  }
  if (best.empty()) throw std::runtime_error("scalefit: optimization failed");
  return finish_fit(obj, best);
}

}  // namespace

double predict_loss(const ScalingLawParams& p, double N, double D) {
  if (!(N > 0.0) || !(D > 0.0))
    throw std::domain_error("scalefit: N and D must be positive");
  return p.E + p.A / std::pow(N, p.alpha) + p.B / std::pow(D, p.beta);
}

FitResult fit_scaling_law(const std::vector<ScalingPoint>& points, const FitConfig& cfg) {
  return fit_impl(points, cfg, cfg.fixed_exponents);
}

FitResult fit_fixed_exponents(const std::vector<ScalingPoint>& points, double alpha,
                              double beta, const FitConfig& cfg) {
  return fit_impl(points, cfg, std::make_pair(alpha, beta));
}

BootstrapResult bootstrap_ci(const std::vector<ScalingPoint>& points,
                             const FitConfig& cfg) {
  if (cfg.bootstrap_n < 1)
    throw std::invalid_argument("scalefit: bootstrap_n must be >= 1");
  BootstrapResult out;
  out.fit = fit_impl(points, cfg, cfg.fixed_exponents);

  Objective obj{nullptr, cfg.huber_delta, cfg.fixed_exponents};
  const std::vector<double> warm = obj.pack(out.fit.params);

  out.replicates.resize(cfg.bootstrap_n);
  parallel_for(cfg.bootstrap_n, [&](std::size_t rep) {
    std::mt19937_64 rng(cfg.seed + 0x9e3779b97f4a7c15ULL * (rep + 1));
    std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);
    std::vector<ScalingPoint> sample(points.size());
    for (auto& s : sample) s = points[pick(rng)];
    Objective robj{&sample, cfg.huber_delta, cfg.fixed_exponents};
    // Warm start from the base optimum; resamples stay near it.
    auto x = nelder_mead(robj, warm, 0.1, 1500);
    out.replicates[rep] = robj.unpack(x);
  });

  auto interval = [&](auto field) {
    std::vector<double> vals;
    vals.reserve(out.replicates.size());
    for (const auto& r : out.replicates) vals.push_back(field(r));
    std::sort(vals.begin(), vals.end());
    const double tail = (1.0 - cfg.ci_level) / 2.0;
    const auto at = [&](double q) {
      const double pos = q * (vals.size() - 1);
      const auto lo = static_cast<std::size_t>(pos);
      const auto hi = std::min(lo + 1, vals.size() - 1);
      return vals[lo] + (pos - lo) * (vals[hi] - vals[lo]);
    };
    return Interval{at(tail), at(1.0 - tail)};
  };
  out.E = interval([](const ScalingLawParams& p) { return p.E; });
  out.A = interval([](const ScalingLawParams& p) { return p.A; });
  out.alpha = interval([](const ScalingLawParams& p) { return p.alpha; });
  out.B = interval([](const ScalingLawParams& p) { return p.B; });
  out.beta = interval([](const ScalingLawParams& p) { return p.beta; });
  return out;
}

double tokens_to_target(const ScalingLawParams& p, double N, double L_target) {
  const double asymptote = p.E + p.A / std::pow(N, p.alpha);
  if (!(L_target > asymptote)) {
    throw std::domain_error(
        "scalefit: target loss " + std::to_string(L_target) +
        " is unreachable, asymptote at N is " + std::to_string(asymptote));
  }
  return std::pow(p.B / (L_target - asymptote), 1.0 / p.beta);
}

ComputeOptimal compute_optimal(const ScalingLawParams& p, double C) {
  if (!(C > 0.0)) throw std::domain_error("scalefit: compute budget must be positive");
  const double G = std::pow(p.beta * p.B / (p.alpha * p.A), 1.0 / p.beta);
  const double N = std::pow(C / (6.0 * G), p.a_opt());
  const double D = C / (6.0 * N);
  return {N, D, predict_loss(p, N, D)};
}

namespace {

// Minimum compute 6 N D(N) to reach L_target under the law, by golden-section
// search over log N above the parameter asymptote.
double min_compute(const ScalingLawParams& p, double L_target) {
  if (!(L_target > p.E))
    throw std::domain_error("scalefit: target loss below irreducible loss");
  const double n_floor = std::pow(p.A / (L_target - p.E), 1.0 / p.alpha);
  double lo = std::log(n_floor) + 1e-6;
  double hi = std::log(n_floor) + 60.0;
  auto compute = [&](double logn) {
    const double n = std::exp(logn);
    return 6.0 * n * tokens_to_target(p, n, L_target);
  };
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = compute(x1), f2 = compute(x2);
  for (int i = 0; i < 300; ++i) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = compute(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = compute(x2);
    }
  }
  return std::min(f1, f2);
}

// N needed to reach L_target at fixed D.
double params_to_target(const ScalingLawParams& p, double D, double L_target) {
  const double asymptote = p.E + p.B / std::pow(D, p.beta);
  if (!(L_target > asymptote)) {
    throw std::domain_error(
        "scalefit: target loss " + std::to_string(L_target) +
        " is unreachable, asymptote at D is " + std::to_string(asymptote));
  }
  return std::pow(p.A / (L_target - asymptote), 1.0 / p.alpha);
}

}  // namespace

double savings_factor(const ScalingLawParams& ref, const ScalingLawParams& arch,
                      SavingsMode mode, double scale, double L_target) {
  switch (mode) {
    case SavingsMode::tokens:
      return tokens_to_target(ref, scale, L_target) /
             tokens_to_target(arch, scale, L_target);
    case SavingsMode::params:
      return params_to_target(ref, scale, L_target) /
             params_to_target(arch, scale, L_target);
    case SavingsMode::compute:
      return min_compute(ref, L_target) / min_compute(arch, L_target);
  }
  throw std::logic_error("scalefit: bad savings mode");
}

}  // namespace hybridlab::scalefit
