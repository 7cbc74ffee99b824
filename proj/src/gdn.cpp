// Copyright 2026 the hybridlab authors
// SPDX-License-Identifier: Apache-2.0

#include "hybridlab/gdn.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hybridlab::gdn {

namespace {

void check_unit_key(const Eigen::VectorXd& k) {
  const double dev = std::abs(k.norm() - 1.0);
  if (!(dev <= 1e-9)) {
    std::ostringstream msg;
    msg << "gdn: key must be unit norm, |norm - 1| = " << dev;
    throw std::domain_error(msg.str());
  }
}

void check_gates(double alpha, double beta) {
  if (!(alpha > 0.0) || !(alpha <= 1.0))
    throw std::domain_error("gdn: alpha must lie in (0, 1]");
  if (!(beta >= 0.0) || !(beta <= 1.0))
    throw std::domain_error("gdn: beta must lie in [0, 1]");
}

double rank1_coeff(const ChunkConfig& cfg, double beta) {
  return (cfg.neg_eigenvalues ? 2.0 : 1.0) * beta;
}

// S <- alpha * (S - cbeta * (S k) k^T / (k.k)) + v k^T
//
// The grouping cbeta * ((sk_a * k_b) / kk) is deliberate: for keys of the
// form (e_i - e_j)/sqrt(2) the quotient is exactly representable, which keeps
// permutation dynamics integral. Plain loops so no expression rewriting can
// change the grouping.
void step_inplace(Eigen::MatrixXd& S, const GdnHeadIO& io, const ChunkConfig& cfg) {
  const double cbeta = rank1_coeff(cfg, io.beta);
  const double kk = io.k.squaredNorm();
  const double alpha = io.alpha;
  const Eigen::VectorXd sk = S * io.k;
  const Eigen::Index rows = S.rows(), cols = S.cols();
  for (Eigen::Index b = 0; b < cols; ++b) {
    const double kb = io.k(b);
    for (Eigen::Index a = 0; a < rows; ++a) {
      S(a, b) = alpha * (S(a, b) - cbeta * ((sk(a) * kb) / kk)) + io.v(a) * kb;
    }
  }
}

void check_dims(const GdnState& state, const GdnHeadIO& io) {
  if (io.dim() != state.d) {
    std::ostringstream msg;
    msg << "gdn: dimension mismatch, state d=" << state.d << " vs io d=" << io.dim();
    throw std::invalid_argument(msg.str());
  }
}

void check_homogeneous(const std::vector<GdnHeadIO>& seq, int d) {
  for (const auto& io : seq) {
    if (io.dim() != d)
      throw std::invalid_argument("gdn: sequence has inhomogeneous head dimensions");
  }
}

}  // namespace

GdnHeadIO::GdnHeadIO(Eigen::VectorXd q_in, Eigen::VectorXd k_in, Eigen::VectorXd v_in,
                     double alpha_in, double beta_in)
    : q(std::move(q_in)), k(std::move(k_in)), v(std::move(v_in)),
      alpha(alpha_in), beta(beta_in) {
  if (q.size() != k.size())
    throw std::invalid_argument("gdn: q and k must have equal length");
  if (v.size() != 2 * k.size())
    throw std::invalid_argument("gdn: v must have length 2d");
  check_unit_key(k);
  check_gates(alpha, beta);
}

Eigen::MatrixXd transition_matrix(const Eigen::VectorXd& k, double beta,
                                  double alpha, bool neg) {
  check_unit_key(k);
  check_gates(alpha, beta);
  const auto d = k.size();
  const double c = neg ? 2.0 : 1.0;
  const double cbeta = c * beta;
  const double kk = k.squaredNorm();
  Eigen::MatrixXd t(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = 0; b < d; ++b) {
      const double delta = (a == b) ? 1.0 : 0.0;
      t(a, b) = alpha * (delta - cbeta * ((k(a) * k(b)) / kk));
    }
  }
  return t;
}

std::pair<GdnState, Eigen::VectorXd> gdn_step(const GdnState& state,
                                              const GdnHeadIO& io,
                                              const ChunkConfig& cfg) {
  check_dims(state, io);
  GdnState next = state;
  step_inplace(next.S, io, cfg);
  Eigen::VectorXd y = next.S * io.q;
  if (!next.S.allFinite())
    throw std::domain_error("gdn: non-finite state entries after step");
  return {std::move(next), std::move(y)};
}

std::vector<Eigen::VectorXd> gdn_scan(const std::vector<GdnHeadIO>& seq,
                                      const ChunkConfig& cfg, GdnState& state) {
  check_homogeneous(seq, state.d);
  std::vector<Eigen::VectorXd> ys;
  ys.reserve(seq.size());
  for (const auto& io : seq) {
    step_inplace(state.S, io, cfg);
    ys.emplace_back(state.S * io.q);
  }
  return ys;
}

std::vector<Eigen::VectorXd> gdn_scan(const std::vector<GdnHeadIO>& seq,
                                      const ChunkConfig& cfg) {
  if (seq.empty()) return {};
  GdnState state(seq.front().dim());
  return gdn_scan(seq, cfg, state);
}

std::vector<Eigen::VectorXd> gdn_chunkwise(const std::vector<GdnHeadIO>& seq,
                                           const ChunkConfig& cfg, GdnState& state) {
  if (cfg.chunk_len < 1)
    throw std::invalid_argument("gdn: chunk_len must be >= 1");
  check_homogeneous(seq, state.d);
  const int d = state.d;
  const Eigen::Index dv = 2 * d;
  std::vector<Eigen::VectorXd> ys(seq.size());

  Eigen::RowVectorXd acc(dv), yrow(dv);
  for (std::size_t start = 0; start < seq.size(); start += cfg.chunk_len) {
    const Eigen::Index len = static_cast<Eigen::Index>(
        std::min<std::size_t>(cfg.chunk_len, seq.size() - start));
    Eigen::MatrixXd K(len, d), Q(len, d), V(len, dv);
    Eigen::VectorXd log_decay(len), bscale(len);
    for (Eigen::Index i = 0; i < len; ++i) {
      const auto& io = seq[start + i];
      K.row(i) = io.k;
      Q.row(i) = io.q;
      V.row(i) = io.v;
      log_decay(i) = std::log(io.alpha) + (i > 0 ? log_decay(i - 1) : 0.0);
      bscale(i) = rank1_coeff(cfg, io.beta) / io.k.squaredNorm();
    }
    // Decay ratio prod_{r=s+1..i} alpha_r, for s <= i.
    auto gamma = [&](Eigen::Index s, Eigen::Index i) {
      return std::exp(log_decay(i) - log_decay(s));
    };

    // Pseudo-payload rows U: the in-chunk state admits the WY-style form
    //   S_i = gamma_i S_0 + sum_{s<=i} gamma(s,i) u_s k_s^T
    // with u_i = v_i - bscale_i (gamma_i S_0 k_i + sum_{s<i} gamma(s,i) (k_s.k_i) u_s),
    // a unit lower-triangular solve against the in-chunk key Gram matrix.
    const Eigen::MatrixXd Gkk = K * K.transpose();
    const Eigen::MatrixXd SK = K * state.S.transpose();  // row i = (S_0 k_i)^T
    Eigen::MatrixXd U = V;
    for (Eigen::Index i = 0; i < len; ++i) {
      acc = std::exp(log_decay(i)) * SK.row(i);
      for (Eigen::Index s = 0; s < i; ++s)
        acc.noalias() += gamma(s, i) * Gkk(s, i) * U.row(s);
      U.row(i) -= bscale(i) * acc;
    }

    // Outputs: y_i = gamma_i S_0 q_i + sum_{s<=i} gamma(s,i) (q_i.k_s) u_s.
    const Eigen::MatrixXd Gqk = Q * K.transpose();
    const Eigen::MatrixXd SQ = Q * state.S.transpose();  // row i = (S_0 q_i)^T
    for (Eigen::Index i = 0; i < len; ++i) {
      yrow = std::exp(log_decay(i)) * SQ.row(i);
      for (Eigen::Index s = 0; s <= i; ++s)
        yrow.noalias() += gamma(s, i) * Gqk(i, s) * U.row(s);
      ys[start + i] = yrow.transpose();
    }

    // Inter-chunk handoff.
    Eigen::MatrixXd next = std::exp(log_decay(len - 1)) * state.S;
    for (Eigen::Index s = 0; s < len; ++s)
      next.noalias() += gamma(s, len - 1) * U.row(s).transpose() * K.row(s);
    state.S = std::move(next);
  }
  if (!state.S.allFinite())
    throw std::domain_error("gdn: non-finite state entries after chunkwise scan");
  return ys;
}

std::vector<Eigen::VectorXd> gdn_chunkwise(const std::vector<GdnHeadIO>& seq,
                                           const ChunkConfig& cfg) {
  if (seq.empty()) return {};
  GdnState state(seq.front().dim());
  return gdn_chunkwise(seq, cfg, state);
}

}  // namespace hybridlab::gdn
