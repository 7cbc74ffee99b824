// Copyright 2026 the hybridlab authors
// SPDX-License-Identifier: Apache-2.0

#include "hybridlab/constructions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "hybridlab/gdn.hpp"

namespace hybridlab::constructions {

namespace {

constexpr int kSlots = 5;

void check_slot(int x) {
  if (x < 0 || x >= kSlots)
    throw std::invalid_argument("constructions: slot index out of [0,5)");
}

int round_bit(double payload) {
  const int bit = payload >= 0.5 ? 1 : 0;
  if (std::abs(payload - bit) > 1e-9)
    throw std::logic_error("constructions: retrieved payload is not a clean bit");
  return bit;
}

}  // namespace

Permutation5 Permutation5::transposition(int i, int j) {
  check_slot(i);
  check_slot(j);
  if (i == j) throw std::invalid_argument("constructions: transposition needs i != j");
  Permutation5 p;
  std::swap(p.mapping[i], p.mapping[j]);
  return p;
}

Permutation5 Permutation5::cycle(const std::vector<int>& elems) {
  Permutation5 p;
  if (elems.size() < 2) return p;
  for (std::size_t t = 0; t < elems.size(); ++t) {
    check_slot(elems[t]);
    p.mapping[elems[t]] = elems[(t + 1) % elems.size()];
  }
  return p;
}

Permutation5 Permutation5::operator*(const Permutation5& other) const {
  Permutation5 out;
  for (int x = 0; x < kSlots; ++x) out.mapping[x] = mapping[other.mapping[x]];
  return out;
}

Permutation5 Permutation5::inverse() const {
  Permutation5 out;
  for (int x = 0; x < kSlots; ++x) out.mapping[mapping[x]] = x;
  return out;
}

std::vector<std::pair<int, int>> transposition_decomposition(const Permutation5& p) {
  std::vector<std::pair<int, int>> word;
  std::array<bool, kSlots> seen{};
  for (int start = 0; start < kSlots; ++start) {
    if (seen[start] || p.mapping[start] == start) continue;
    // Walk the cycle start -> p(start) -> ...; the word (c0 c1)(c1 c2)...
    // recomposes to the cycle under left-to-right products.
    int cur = start;
    while (!seen[cur]) {
      seen[cur] = true;
      const int nxt = p.mapping[cur];
      if (nxt != start) word.emplace_back(cur, nxt);
      cur = nxt;
    }
  }
  return word;
}

TranspositionHead build_transposition_head(int i, int j) {
  check_slot(i);
  check_slot(j);
  if (i == j) throw std::invalid_argument("constructions: transposition head needs i != j");
  TranspositionHead head;
  head.i = i;
  head.j = j;
  head.k = Eigen::VectorXd::Zero(kSlots);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  head.k(i) = inv_sqrt2;
  head.k(j) = -inv_sqrt2;
  return head;
}

Permutation5 compose_permutations_gdn(
    const std::vector<std::pair<int, int>>& transpositions) {
  using gdn::ChunkConfig;
  using gdn::GdnHeadIO;

  const ChunkConfig cfg{.chunk_len = 64, .neg_eigenvalues = true};
  const Eigen::VectorXd zero_q = Eigen::VectorXd::Zero(kSlots);
  const Eigen::VectorXd zero_v = Eigen::VectorXd::Zero(2 * kSlots);

  std::vector<GdnHeadIO> seq;
  seq.reserve(kSlots + transpositions.size());
  // Write tokens seed the identity into the top 5x5 block of the state.
  for (int r = 0; r < kSlots; ++r) {
    Eigen::VectorXd k = Eigen::VectorXd::Zero(kSlots);
    k(r) = 1.0;
    Eigen::VectorXd v = zero_v;
    v(r) = 1.0;
    seq.emplace_back(zero_q, k, v, 1.0, 1.0);
  }
  for (const auto& [i, j] : transpositions) {
    const TranspositionHead head = build_transposition_head(i, j);
    seq.emplace_back(zero_q, head.k, zero_v, head.alpha, head.beta);
  }

  gdn::GdnState state(kSlots);
  gdn::gdn_scan(seq, cfg, state);

  // Column c of the top block is one-hot at the original index whose content
  // now sits in slot c. Entries must be exactly integral.
  Permutation5 result;
  for (int c = 0; c < kSlots; ++c) {
    int row = -1;
    for (int r = 0; r < kSlots; ++r) {
      const double entry = state.S(r, c);
      if (entry != 0.0 && entry != 1.0 && entry != -1.0)
        throw std::logic_error("constructions: state entry drifted off {-1,0,1}");
      if (entry == 1.0) {
        if (row >= 0) throw std::logic_error("constructions: state column not one-hot");
        row = r;
      }
    }
    if (row < 0) throw std::logic_error("constructions: state column not one-hot");
    result.mapping[c] = row;
  }
  return result;
}

int parity_gdn(const std::vector<int>& bits) {
  std::vector<std::pair<int, int>> swaps;
  swaps.reserve(bits.size());
  for (int b : bits) {
    if (b != 0 && b != 1) throw std::invalid_argument("constructions: bits must be 0/1");
    if (b == 1) swaps.emplace_back(0, 1);
  }
  const Permutation5 p = compose_permutations_gdn(swaps);
  for (int slot = 0; slot < kSlots; ++slot) {
    if (p.mapping[slot] == 0) return slot;
  }
  throw std::logic_error("constructions: element 0 vanished");
}

double hard_attention_retrieve(const HardAttnTable& table, const Eigen::VectorXd& query) {
  if (table.keys.empty()) throw std::invalid_argument("constructions: empty attention table");
  if (table.keys.size() != table.values.size())
    throw std::invalid_argument("constructions: keys/values size mismatch");
  double best = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < table.keys.size(); ++i) {
    const double score = table.keys[i].dot(query);
    if (score > best) {
      best = score;
      sum = table.values[i];
      count = 1;
    } else if (score == best) {
      sum += table.values[i];
      ++count;
    }
  }
  return sum / count;
}

Eigen::VectorXd position_encoding(int i, int m) {
  if (m < 1 || i < 0 || i >= m)
    throw std::invalid_argument("constructions: position encoding needs 0 <= i < m");
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(i) / m;
  Eigen::VectorXd phi(2);
  phi << std::cos(angle), std::sin(angle);
  return phi;
}

HardAttnTable bit_table(const std::vector<int>& bits) {
  HardAttnTable table;
  const int m = static_cast<int>(bits.size());
  table.keys.reserve(bits.size());
  table.values.reserve(bits.size());
  for (int i = 0; i < m; ++i) {
    table.keys.push_back(position_encoding(i, m));
    table.values.push_back(static_cast<double>(bits[i]));
  }
  return table;
}

int solve_state_based_recall(const taskgen::TaskInstance& instance, LayerOrder order,
                             PointerEncoding encoding) {
  if (instance.kind != taskgen::TaskKind::state_based_recall)
    throw std::invalid_argument("constructions: instance is not state-based recall");
  if (instance.m < 1 || instance.bits.size() != static_cast<std::size_t>(instance.m))
    throw std::invalid_argument("constructions: malformed bit array");
  for (int p : instance.pointers) {
    if (p < 0 || p >= instance.m)
      throw std::invalid_argument("constructions: pointer out of range");
  }
  if (instance.query_var < 0 || instance.query_var >= kSlots)
    throw std::invalid_argument("constructions: query variable out of range");
  if (order == LayerOrder::attn_first && encoding == PointerEncoding::binary)
    throw std::invalid_argument(
        "constructions: attention-first requires unary pointer encoding");

  const Permutation5 sigma = compose_permutations_gdn(instance.swaps);
  const HardAttnTable table = bit_table(instance.bits);

  if (order == LayerOrder::gdn_first) {
    // Compose swaps over the pointers, then one retrieval at the permuted
    // pointer of the queried variable.
    const int ptr = instance.pointers[sigma.mapping[instance.query_var]];
    return round_bit(hard_attention_retrieve(table, position_encoding(ptr, instance.m)));
  }

  // Attention first: five retrieval heads fetch the pointed-to bits, then the
  // swaps are composed over the retrieved values.
  std::array<int, kSlots> fetched{};
  for (int var = 0; var < kSlots; ++var) {
    fetched[var] = round_bit(hard_attention_retrieve(
        table, position_encoding(instance.pointers[var], instance.m)));
  }
  return fetched[sigma.mapping[instance.query_var]];
}

int solve_state_tracking(const taskgen::TaskInstance& instance) {
  if (instance.kind != taskgen::TaskKind::state_tracking)
    throw std::invalid_argument("constructions: instance is not state tracking");
  const Permutation5 sigma = compose_permutations_gdn(instance.swaps);
  return sigma.mapping[instance.query_var];
}

int solve_recall(const taskgen::TaskInstance& instance) {
  if (instance.kind != taskgen::TaskKind::recall)
    throw std::invalid_argument("constructions: instance is not recall");
  const HardAttnTable table = bit_table(instance.bits);
  return round_bit(
      hard_attention_retrieve(table, position_encoding(instance.query_var, instance.m)));
}

}  // namespace hybridlab::constructions
