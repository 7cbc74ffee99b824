// Copyright 2026 the hybridlab authors
// SPDX-License-Identifier: Apache-2.0
//
// Training-free components: GDN heads that realize exact swap dynamics over
// five slots, an averaging-hard attention table, and the two hybrid solvers
// for state-based recall (GDN-then-attention and attention-then-GDN).

#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "hybridlab/taskgen.hpp"

namespace hybridlab::constructions {

// Element of S5. mapping[i] is the image of i; composition (a * b)(x) = a(b(x)).
struct Permutation5 {
  std::array<int, 5> mapping{0, 1, 2, 3, 4};

  static Permutation5 identity() { return {}; }
  static Permutation5 transposition(int i, int j);
  // Cycle through the listed elements in order (c0 -> c1 -> ... -> c0).
  static Permutation5 cycle(const std::vector<int>& elems);

  int operator()(int x) const { return mapping[static_cast<std::size_t>(x)]; }
  Permutation5 operator*(const Permutation5& other) const;
  Permutation5 inverse() const;
  bool operator==(const Permutation5&) const = default;
};

// Word of transpositions whose left-to-right product equals p.
// A 5-cycle needs four transpositions; the identity decomposes to none.
std::vector<std::pair<int, int>> transposition_decomposition(const Permutation5& p);

// GDN head parameters whose transition matrix swaps coordinates i and j:
// k = (e_i - e_j)/sqrt(2), beta = 1, alpha = 1, negative eigenvalues on.
struct TranspositionHead {
  int i = 0, j = 1;
  Eigen::VectorXd k;
  double alpha = 1.0;
  double beta = 1.0;
  bool neg = true;
};
TranspositionHead build_transposition_head(int i, int j);

// Runs the GDN kernel over the constructed heads, starting from a state
// seeded with the identity, and reads the resulting permutation off the
// state columns. The arithmetic is exact: entries stay in {-1, 0, 1}.
Permutation5 compose_permutations_gdn(const std::vector<std::pair<int, int>>& transpositions);

// XOR of the bits, computed by applying the (0,1) swap head once per 1-bit
// and reporting the final slot of element 0.
int parity_gdn(const std::vector<int>& bits);

// Averaging-hard attention: uniform weight over the argmax-scoring keys.
struct HardAttnTable {
  std::vector<Eigen::VectorXd> keys;
  std::vector<double> values;
};
double hard_attention_retrieve(const HardAttnTable& table, const Eigen::VectorXd& query);

// Unit-circle position encoding with pairwise-distinct angles for i in [0, m).
Eigen::VectorXd position_encoding(int i, int m);
HardAttnTable bit_table(const std::vector<int>& bits);

enum class LayerOrder { gdn_first, attn_first };
enum class PointerEncoding { unary, binary };

// Solves a state-based recall instance with one alternation of layer types.
// gdn_first composes the swaps over the pointers and retrieves the bit at the
// permuted pointer; attn_first retrieves all five pointed-to bits and then
// composes the swaps over the retrieved bits. attn_first requires unary
// pointer encoding.
int solve_state_based_recall(const taskgen::TaskInstance& instance, LayerOrder order,
                             PointerEncoding encoding = PointerEncoding::unary);

// Companion solvers used by the CLI batch runs: state tracking through the
// GDN composer, recall through the attention table.
int solve_state_tracking(const taskgen::TaskInstance& instance);
int solve_recall(const taskgen::TaskInstance& instance);

}  // namespace hybridlab::constructions
