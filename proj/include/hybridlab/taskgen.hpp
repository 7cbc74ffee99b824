// Copyright 2026 the hybridlab authors
// SPDX-License-Identifier: Apache-2.0
//
// Seeded generators for the three synthetic code-evaluation tasks, their
// brute-force oracles, and the code-like text rendering with optional
// interleaved state-reveal asserts.

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace hybridlab::taskgen {

enum class TaskKind { state_tracking, recall, state_based_recall };

std::string to_string(TaskKind kind);
TaskKind task_kind_from_string(const std::string& name);

// A generated problem. Five variables a..e throughout.
//  - state_tracking: n swaps over variables initialized to 0..4; m = 0.
//  - recall: m bits and one queried index; n = 0, query_var is the index.
//  - state_based_recall: m bits, five pointers into them, n swaps over the
//    pointer variables, query_var in [0,5).
struct TaskInstance {
  TaskKind kind = TaskKind::state_tracking;
  int n = 0;
  int m = 0;
  std::vector<int> bits;
  std::array<int, 5> pointers{0, 0, 0, 0, 0};
  std::vector<std::pair<int, int>> swaps;
  int query_var = 0;
  std::uint64_t seed = 0;
  int answer = 0;

  // Semantic equality; the seed is generator metadata and is not compared.
  bool same_problem(const TaskInstance& other) const;
};

struct RenderOptions {
  enum class Spacing { none, fixed, randomized_pow2 };
  Spacing spacing = Spacing::none;
  int fixed_k = 0;               // reveal after every k-th swap when fixed
  double strict_fraction = 0.2;  // fraction of instances rendered without reveals
};

TaskInstance gen_task(TaskKind kind, int n, int m, std::uint64_t seed);

// Brute-force answer: replays the swaps on an explicit value tuple.
int oracle_answer(const TaskInstance& instance);

// Emits the code-like template; deterministic per (instance, options). The
// final line is the unanswered assert.
std::string render_text(const TaskInstance& instance, const RenderOptions& options = {});

// Reconstructs the instance from rendered text (reveal asserts are validated
// and skipped). The seed cannot be recovered; the answer is recomputed.
TaskInstance parse_text(const std::string& text);

}  // namespace hybridlab::taskgen
