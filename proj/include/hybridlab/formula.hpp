// Copyright 2026 the hybridlab authors
// SPDX-License-Identifier: Apache-2.0
//
// Polish-notation boolean formulas over {0, 1, AND, OR}, compiled into
// width-5 permutation programs whose product is a fixed 5-cycle exactly when
// the formula is true, and evaluated through the GDN transposition composer.

#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "hybridlab/constructions.hpp"

namespace hybridlab::formula {

struct ParseError : std::runtime_error {
  std::size_t position;  // byte offset into the input
  ParseError(const std::string& what, std::size_t pos)
      : std::runtime_error(what), position(pos) {}
};

struct FormulaAst {
  enum class Kind { const0, const1, op_and, op_or };
  Kind kind = Kind::const0;
  std::unique_ptr<FormulaAst> left, right;  // null for constants
  int depth = 0;

  bool is_leaf() const { return kind == Kind::const0 || kind == Kind::const1; }
};

// Whitespace-separated tokens over {AND, OR, 0, 1}; consumes the whole input.
FormulaAst parse_polish(const std::string& text);

// Reference evaluation.
int eval_ast(const FormulaAst& ast);

// Sequence of S5 instructions; product(P) == accept_cycle iff the compiled
// formula evaluates to 1, and the identity otherwise.
struct PermProgram {
  std::vector<constructions::Permutation5> instructions;
  constructions::Permutation5 accept_cycle;

  constructions::Permutation5 product() const;
};

// The fixed 5-cycle that the top-level program targets.
constructions::Permutation5 accept_cycle();

// Barrington compilation: constants map to {identity, cycle}, AND to the
// commutator of conjugated sub-programs, OR to the De Morgan dual of AND.
// Program length is bounded by 4^depth (with equality on full AND trees).
// Throws std::length_error above max_depth, naming the projected length.
PermProgram barrington_compile(const FormulaAst& ast, int max_depth = 14);

// Projected worst-case instruction count for a given depth.
std::uint64_t program_length_bound(int depth);

// Decomposes every instruction into transpositions, composes them through
// the GDN kernel, and accepts iff the product equals the accept cycle.
int eval_via_gdn(const PermProgram& program);

}  // namespace hybridlab::formula
