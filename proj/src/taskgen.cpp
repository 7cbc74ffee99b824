// Copyright 2026 the hybridlab authors
// SPDX-License-Identifier: Apache-2.0

#include "hybridlab/taskgen.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

namespace hybridlab::taskgen {

namespace {

constexpr char kVars[5] = {'a', 'b', 'c', 'd', 'e'};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 make_rng(TaskKind kind, int n, int m, std::uint64_t seed,
                         std::uint64_t salt = 0) {
  std::uint64_t h = splitmix64(seed ^ salt);
  h = splitmix64(h ^ (static_cast<std::uint64_t>(kind) + 1));
  h = splitmix64(h ^ (static_cast<std::uint64_t>(n) << 20));
  h = splitmix64(h ^ static_cast<std::uint64_t>(m));
  return std::mt19937_64(h);
}

int var_index(char c) {
  for (int i = 0; i < 5; ++i)
    if (kVars[i] == c) return i;
  throw std::invalid_argument(std::string("taskgen: unknown variable '") + c + "'");
}

std::array<int, 5> replay(const TaskInstance& instance, std::size_t upto) {
  std::array<int, 5> tuple{};
  if (instance.kind == TaskKind::state_based_recall) {
    tuple = instance.pointers;
  } else {
    tuple = {0, 1, 2, 3, 4};
  }
  for (std::size_t t = 0; t < upto && t < instance.swaps.size(); ++t)
    std::swap(tuple[instance.swaps[t].first], tuple[instance.swaps[t].second]);
  return tuple;
}

std::string bits_line(const std::vector<int>& bits) {
  std::ostringstream out;
  out << "bits = [";
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (i) out << ", ";
    out << bits[i];
  }
  out << "]";
  return out.str();
}

// Reveal cadence in swaps; 0 means no reveals.
int reveal_spacing(const TaskInstance& instance, const RenderOptions& options) {
  if (instance.swaps.empty()) return 0;
  auto strict_rng = make_rng(instance.kind, instance.n, instance.m, instance.seed,
                             0x5452494354ULL);  // "TRICT"
  if (std::uniform_real_distribution<double>(0.0, 1.0)(strict_rng) <
      options.strict_fraction)
    return 0;
  switch (options.spacing) {
    case RenderOptions::Spacing::none:
      return 0;
    case RenderOptions::Spacing::fixed:
      if (options.fixed_k < 1)
        throw std::invalid_argument("taskgen: fixed spacing needs k >= 1");
      return options.fixed_k;
    case RenderOptions::Spacing::randomized_pow2: {
      std::vector<int> candidates;
      for (int p = 1; p <= std::max(1, instance.n); p *= 2) candidates.push_back(p);
      auto rng = make_rng(instance.kind, instance.n, instance.m, instance.seed,
                          0x504f573200ULL);  // "POW2"
      std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
      return candidates[pick(rng)];
    }
  }
  return 0;
}

}  // namespace

std::string to_string(TaskKind kind) {
  switch (kind) {
    case TaskKind::state_tracking: return "state_tracking";
    case TaskKind::recall: return "recall";
    case TaskKind::state_based_recall: return "state_based_recall";
  }
  throw std::logic_error("taskgen: bad kind");
}

TaskKind task_kind_from_string(const std::string& name) {
  if (name == "state_tracking") return TaskKind::state_tracking;
  if (name == "recall") return TaskKind::recall;
  if (name == "state_based_recall") return TaskKind::state_based_recall;
  throw std::invalid_argument("taskgen: unknown task kind '" + name + "'");
}

bool TaskInstance::same_problem(const TaskInstance& other) const {
  return kind == other.kind && n == other.n && m == other.m && bits == other.bits &&
         pointers == other.pointers && swaps == other.swaps &&
         query_var == other.query_var && answer == other.answer;
}

TaskInstance gen_task(TaskKind kind, int n, int m, std::uint64_t seed) {
  if (n < 0 || m < 0) throw std::invalid_argument("taskgen: n, m must be >= 0");
  switch (kind) {
    case TaskKind::state_tracking:
      if (m != 0) throw std::invalid_argument("taskgen: state tracking requires m = 0");
      break;
    case TaskKind::recall:
      if (n != 0) throw std::invalid_argument("taskgen: recall requires n = 0");
      if (m < 1) throw std::invalid_argument("taskgen: recall requires m >= 1");
      break;
    case TaskKind::state_based_recall:
      if (m < 1)
        throw std::invalid_argument("taskgen: state-based recall requires m >= 1");
      break;
  }

  auto rng = make_rng(kind, n, m, seed);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<int> var5(0, 4);

  TaskInstance inst;
  inst.kind = kind;
  inst.n = n;
  inst.m = m;
  inst.seed = seed;

  if (kind != TaskKind::state_tracking) {
    inst.bits.resize(m);
    for (int i = 0; i < m; ++i) inst.bits[i] = coin(rng);
  }
  if (kind == TaskKind::state_based_recall) {
    std::uniform_int_distribution<int> index(0, m - 1);
    for (int v = 0; v < 5; ++v) inst.pointers[v] = index(rng);
  }
  if (kind != TaskKind::recall) {
    // Uniform over the 10 unordered variable pairs.
    std::uniform_int_distribution<int> pair10(0, 9);
    inst.swaps.reserve(n);
    for (int t = 0; t < n; ++t) {
      int r = pair10(rng);
      int i = 0;
      while (r >= 4 - i) {
        r -= 4 - i;
        ++i;
      }
      inst.swaps.emplace_back(i, i + 1 + r);
    }
    inst.query_var = var5(rng);
  } else {
    std::uniform_int_distribution<int> index(0, m - 1);
    inst.query_var = index(rng);
  }
  inst.answer = oracle_answer(inst);
  return inst;
}

int oracle_answer(const TaskInstance& instance) {
  switch (instance.kind) {
    case TaskKind::recall:
      if (instance.query_var < 0 || instance.query_var >= instance.m)
        throw std::invalid_argument("taskgen: recall query out of range");
      return instance.bits[instance.query_var];
    case TaskKind::state_tracking:
      return replay(instance, instance.swaps.size())[instance.query_var];
    case TaskKind::state_based_recall: {
      const int ptr = replay(instance, instance.swaps.size())[instance.query_var];
      if (ptr < 0 || ptr >= instance.m)
        throw std::invalid_argument("taskgen: permuted pointer out of range");
      return instance.bits[ptr];
    }
  }
  throw std::logic_error("taskgen: bad kind");
}

std::string render_text(const TaskInstance& instance, const RenderOptions& options) {
  const int spacing = reveal_spacing(instance, options);
  std::ostringstream out;

  auto emit_swaps = [&] {
    int reveal_count = 0;
    for (std::size_t t = 0; t < instance.swaps.size(); ++t) {
      const auto [i, j] = instance.swaps[t];
      out << kVars[i] << ", " << kVars[j] << " = " << kVars[j] << ", " << kVars[i]
          << "\n";
      if (spacing > 0 && (t + 1) % static_cast<std::size_t>(spacing) == 0) {
        const int var = reveal_count++ % 5;
        out << "assert " << kVars[var] << " == " << replay(instance, t + 1)[var]
            << "\n";
      }
    }
  };

  switch (instance.kind) {
    case TaskKind::state_tracking:
      out << "a, b, c, d, e = range(5)\n";
      emit_swaps();
      out << "\nassert " << kVars[instance.query_var] << " == ";
      break;
    case TaskKind::recall:
      out << bits_line(instance.bits) << "\n";
      out << "a = " << instance.query_var << "\n";
      out << "\nassert bits[a] == ";
      break;
    case TaskKind::state_based_recall:
      out << bits_line(instance.bits) << "\n";
      out << "a, b, c, d, e = ";
      for (int v = 0; v < 5; ++v) out << (v ? ", " : "") << instance.pointers[v];
      out << "\n\n";
      emit_swaps();
      out << "\nassert bits[" << kVars[instance.query_var] << "] == ";
      break;
  }
  return out.str();
}

namespace {

std::vector<int> parse_bits_line(const std::string& line) {
  const auto open = line.find('[');
  const auto close = line.rfind(']');
  if (line.rfind("bits = [", 0) != 0 || close == std::string::npos || close < open)
    throw std::invalid_argument("taskgen: malformed bits line: " + line);
  std::vector<int> bits;
  std::string body = line.substr(open + 1, close - open - 1);
  std::istringstream in(body);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    const auto pos = tok.find_first_not_of(' ');
    if (pos == std::string::npos)
      throw std::invalid_argument("taskgen: empty bit entry");
    const char c = tok[pos];
    if (c != '0' && c != '1')
      throw std::invalid_argument("taskgen: bits must be 0/1");
    bits.push_back(c - '0');
  }
  if (bits.empty()) throw std::invalid_argument("taskgen: empty bit array");
  return bits;
}

bool parse_swap_line(const std::string& line, std::pair<int, int>& swap) {
  // "x, y = y, x"
  if (line.size() != 11 || line.substr(1, 2) != ", " || line.substr(4, 3) != " = " ||
      line.substr(8, 2) != ", ")
    return false;
  const char a = line[0], b = line[3], x = line[7], y = line[10];
  if (a != y || b != x) return false;
  swap = {var_index(a), var_index(b)};
  return true;
}

}  // namespace

TaskInstance parse_text(const std::string& text) {
  std::vector<std::string> lines;
  {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
  }
  if (lines.size() < 2) throw std::invalid_argument("taskgen: text too short");

  TaskInstance inst;
  std::size_t pos = 0;
  if (lines[0] == "a, b, c, d, e = range(5)") {
    inst.kind = TaskKind::state_tracking;
    pos = 1;
  } else if (lines[0].rfind("bits = [", 0) == 0) {
    inst.bits = parse_bits_line(lines[0]);
    inst.m = static_cast<int>(inst.bits.size());
    if (lines.size() > 1 && lines[1].rfind("a, b, c, d, e = ", 0) == 0) {
      inst.kind = TaskKind::state_based_recall;
      std::istringstream in(lines[1].substr(16));
      std::string tok;
      std::vector<int> ptrs;
      while (std::getline(in, tok, ',')) ptrs.push_back(std::stoi(tok));
      if (ptrs.size() != 5)
        throw std::invalid_argument("taskgen: expected five pointers");
      std::copy(ptrs.begin(), ptrs.end(), inst.pointers.begin());
      pos = 2;
    } else {
      inst.kind = TaskKind::recall;
      if (lines[1].rfind("a = ", 0) != 0)
        throw std::invalid_argument("taskgen: malformed recall query line");
      inst.query_var = std::stoi(lines[1].substr(4));
      pos = 2;
    }
  } else {
    throw std::invalid_argument("taskgen: unrecognized first line: " + lines[0]);
  }

  // Body: swap lines and reveal asserts, then the final unanswered assert.
  std::pair<int, int> swap;
  for (; pos + 1 < lines.size(); ++pos) {
    const std::string& line = lines[pos];
    if (line.empty()) continue;
    if (parse_swap_line(line, swap)) {
      inst.swaps.push_back(swap);
      continue;
    }
    if (line.rfind("assert ", 0) == 0) {
      // Reveal: "assert <var> == <int>"; validated against the replay.
      if (line.size() < 13 || line.substr(8, 4) != " == ")
        throw std::invalid_argument("taskgen: malformed reveal: " + line);
      const int var = var_index(line[7]);
      const int value = std::stoi(line.substr(12));
      if (replay(inst, inst.swaps.size())[var] != value)
        throw std::invalid_argument("taskgen: reveal contradicts replay: " + line);
      continue;
    }
    throw std::invalid_argument("taskgen: unrecognized line: " + line);
  }

  const std::string& last = lines.back();
  if (inst.kind == TaskKind::recall) {
    if (last != "assert bits[a] == ")
      throw std::invalid_argument("taskgen: malformed final assert: " + last);
  } else if (inst.kind == TaskKind::state_tracking) {
    if (last.rfind("assert ", 0) != 0 || last.size() != 12 ||
        last.substr(8, 4) != " == ")
      throw std::invalid_argument("taskgen: malformed final assert: " + last);
    inst.query_var = var_index(last[7]);
  } else {
    if (last.rfind("assert bits[", 0) != 0 || last.size() != 18 ||
        last.substr(13, 5) != "] == ")
      throw std::invalid_argument("taskgen: malformed final assert: " + last);
    inst.query_var = var_index(last[12]);
  }

  inst.n = static_cast<int>(inst.swaps.size());
  inst.answer = oracle_answer(inst);
  return inst;
}

}  // namespace hybridlab::taskgen
