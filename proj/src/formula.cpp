// Copyright 2026 the hybridlab authors
// SPDX-License-Identifier: Apache-2.0

#include "hybridlab/formula.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>

namespace hybridlab::formula {

using constructions::Permutation5;

namespace {

struct Token {
  std::string text;
  std::size_t position;
};

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    tokens.push_back({text.substr(start, i - start), start});
  }
  return tokens;
}

FormulaAst parse_tokens(const std::vector<Token>& tokens, std::size_t& cursor,
                        std::size_t end_position) {
  if (cursor >= tokens.size())
    throw ParseError("formula: missing operand at end of input", end_position);
  const Token& tok = tokens[cursor++];
  FormulaAst node;
  if (tok.text == "0") {
    node.kind = FormulaAst::Kind::const0;
    return node;
  }
  if (tok.text == "1") {
    node.kind = FormulaAst::Kind::const1;
    return node;
  }
  if (tok.text == "AND" || tok.text == "OR") {
    node.kind = tok.text == "AND" ? FormulaAst::Kind::op_and : FormulaAst::Kind::op_or;
    node.left = std::make_unique<FormulaAst>(parse_tokens(tokens, cursor, end_position));
    node.right = std::make_unique<FormulaAst>(parse_tokens(tokens, cursor, end_position));
    node.depth = 1 + std::max(node.left->depth, node.right->depth);
    return node;
  }
  throw ParseError("formula: unknown token '" + tok.text + "'", tok.position);
}

// Pair of 5-cycles whose commutator a*b*a^-1*b^-1 is again a 5-cycle,
// found once by search over the 24 x 24 candidate pairs.
struct CommutatorBasis {
  Permutation5 a, b, comm;
};

bool is_five_cycle(const Permutation5& p) {
  int cur = p.mapping[0];
  int steps = 1;
  while (cur != 0) {
    cur = p.mapping[cur];
    ++steps;
    if (steps > 5) return false;
  }
  return steps == 5;
}

std::vector<Permutation5> all_five_cycles() {
  std::vector<Permutation5> cycles;
  std::array<int, 4> rest{1, 2, 3, 4};
  std::sort(rest.begin(), rest.end());
  do {
    cycles.push_back(Permutation5::cycle({0, rest[0], rest[1], rest[2], rest[3]}));
  } while (std::next_permutation(rest.begin(), rest.end()));
  return cycles;
}

const CommutatorBasis& commutator_basis() {
  static const CommutatorBasis basis = [] {
    const auto cycles = all_five_cycles();
    for (const auto& a : cycles) {
      for (const auto& b : cycles) {
        const Permutation5 comm = a * b * a.inverse() * b.inverse();
        if (is_five_cycle(comm)) return CommutatorBasis{a, b, comm};
      }
    }
    throw std::logic_error("formula: no commutator pair found in S5");
  }();
  return basis;
}

// Conjugator g with g * from * g^-1 == to, for 5-cycles from/to.
Permutation5 conjugator(const Permutation5& from, const Permutation5& to) {
  Permutation5 g;
  int cf = 0, ct = 0;
  for (int step = 0; step < 5; ++step) {
    g.mapping[cf] = ct;
    cf = from.mapping[cf];
    ct = to.mapping[ct];
  }
  return g;
}

using Program = std::vector<Permutation5>;

void conjugate_in_place(Program& prog, const Permutation5& g) {
  const Permutation5 ginv = g.inverse();
  for (auto& inst : prog) inst = g * inst * ginv;
}

// Program whose product is `target` iff the subformula is true (id otherwise).
Program compile_node(const FormulaAst& node, const Permutation5& target);

// Program whose product is `target` iff the subformula is FALSE: compile
// against target^-1 and fold one extra factor into the last instruction.
Program compile_negated(const FormulaAst& node, const Permutation5& target) {
  Program prog = compile_node(node, target.inverse());
  prog.back() = prog.back() * target;
  return prog;
}

Program concat4(Program p1, const Program& p2, const Program& p3, const Program& p4) {
  p1.reserve(p1.size() + p2.size() + p3.size() + p4.size());
  p1.insert(p1.end(), p2.begin(), p2.end());
  p1.insert(p1.end(), p3.begin(), p3.end());
  p1.insert(p1.end(), p4.begin(), p4.end());
  return p1;
}

Program compile_node(const FormulaAst& node, const Permutation5& target) {
  switch (node.kind) {
    case FormulaAst::Kind::const0:
      return {Permutation5::identity()};
    case FormulaAst::Kind::const1:
      return {target};
    case FormulaAst::Kind::op_and: {
      const auto& basis = commutator_basis();
      Program prog = concat4(compile_node(*node.left, basis.a),
                             compile_node(*node.right, basis.b),
                             compile_node(*node.left, basis.a.inverse()),
                             compile_node(*node.right, basis.b.inverse()));
      conjugate_in_place(prog, conjugator(basis.comm, target));
      return prog;
    }
    case FormulaAst::Kind::op_or: {
      // f OR g == NOT(NOT f AND NOT g).
      const auto& basis = commutator_basis();
      Program prog = concat4(compile_negated(*node.left, basis.a),
                             compile_negated(*node.right, basis.b),
                             compile_negated(*node.left, basis.a.inverse()),
                             compile_negated(*node.right, basis.b.inverse()));
      // Product is basis.comm iff (NOT f AND NOT g); negate and retarget.
      prog.back() = prog.back() * basis.comm.inverse();
      conjugate_in_place(prog, conjugator(basis.comm.inverse(), target));
      return prog;
    }
  }
  throw std::logic_error("formula: bad node kind");
}

}  // namespace

FormulaAst parse_polish(const std::string& text) {
  const auto tokens = tokenize(text);
  if (tokens.empty()) throw ParseError("formula: empty input", 0);
  std::size_t cursor = 0;
  FormulaAst ast = parse_tokens(tokens, cursor, text.size());
  if (cursor != tokens.size())
    throw ParseError("formula: dangling operand '" + tokens[cursor].text + "'",
                     tokens[cursor].position);
  return ast;
}

int eval_ast(const FormulaAst& ast) {
  switch (ast.kind) {
    case FormulaAst::Kind::const0: return 0;
    case FormulaAst::Kind::const1: return 1;
    case FormulaAst::Kind::op_and: return eval_ast(*ast.left) & eval_ast(*ast.right);
    case FormulaAst::Kind::op_or: return eval_ast(*ast.left) | eval_ast(*ast.right);
  }
  throw std::logic_error("formula: bad node kind");
}

Permutation5 PermProgram::product() const {
  Permutation5 prod;
  for (const auto& inst : instructions) prod = prod * inst;
  return prod;
}

Permutation5 accept_cycle() { return Permutation5::cycle({0, 1, 2, 3, 4}); }

std::uint64_t program_length_bound(int depth) {
  std::uint64_t len = 1;
  for (int i = 0; i < depth; ++i) len *= 4;
  return len;
}

PermProgram barrington_compile(const FormulaAst& ast, int max_depth) {
  if (ast.depth > max_depth) {
    std::ostringstream msg;
    msg << "formula: depth " << ast.depth << " exceeds limit " << max_depth
        << " (projected program length " << program_length_bound(ast.depth) << ")";
    throw std::length_error(msg.str());
  }
  PermProgram program;
  program.accept_cycle = accept_cycle();
  program.instructions = compile_node(ast, program.accept_cycle);
  return program;
}

int eval_via_gdn(const PermProgram& program) {
  std::vector<std::pair<int, int>> transpositions;
  transpositions.reserve(program.instructions.size() * 4);
  for (const auto& inst : program.instructions) {
    const auto word = constructions::transposition_decomposition(inst);
    transpositions.insert(transpositions.end(), word.begin(), word.end());
  }
  const Permutation5 composed = constructions::compose_permutations_gdn(transpositions);
  return composed == program.accept_cycle ? 1 : 0;
}

}  // namespace hybridlab::formula
