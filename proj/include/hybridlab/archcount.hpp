// Copyright 2026 the hybridlab authors
// SPDX-License-Identifier: Apache-2.0
//
// Exact parameter counts, forward FLOPs per token, training compute, and
// inference state sizes for transformer / GDN / Mamba2 layer stacks.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hybridlab::archcount {

enum class LayerKind { attention, gdn, mamba2 };
std::string to_string(LayerKind kind);
LayerKind layer_kind_from_string(const std::string& name);

struct MambaConfig {
  int expand = 2;
  int state = 128;
  int groups = 1;
};

struct ArchSpec {
  int d = 0;  // model width
  int h = 0;  // attention heads
  int l = 0;  // layers
  std::int64_t V = 100352;
  std::vector<LayerKind> schedule;  // one entry per layer
  std::optional<int> h_gdn_override;
  MambaConfig mamba;
  std::int64_t seq_len = 4096;
  int chunk_len = 256;

  // MLP hidden size: (3/2)(8d/3) = 4d rounded up to a multiple of 256.
  int d_mlp() const;
  // GDN head dim: 0.75 d/h rounded up to a multiple of 128, unless overridden.
  int h_gdn() const;
  int gdn_key_dim() const { return h * h_gdn(); }
  int gdn_value_dim() const { return 2 * gdn_key_dim(); }

  void validate() const;

  // Schedule builders. `ratio` r places an attention layer every r layers
  // (1-indexed multiples of r); `middle` centers the attention block instead.
  // Both force a final attention layer when requested.
  static std::vector<LayerKind> uniform(int l, LayerKind kind);
  static std::vector<LayerKind> interleaved(int l, int ratio, LayerKind fill,
                                            bool force_final_attention = true);
  static std::vector<LayerKind> middle(int l, int ratio, LayerKind fill,
                                       bool force_final_attention = true);
};

struct LayerParams {
  LayerKind kind;
  std::int64_t params;
};

struct CountReport {
  std::int64_t total_params = 0;
  std::int64_t non_embedding_params = 0;  // total - V*d (embedding only)
  std::vector<LayerParams> per_layer;
};

std::int64_t layer_params(const ArchSpec& spec, LayerKind kind);
CountReport count_params(const ArchSpec& spec);

enum class FlopMode { recurrent, chunkwise_train };
std::string to_string(FlopMode mode);

// Per-token MACs for one layer. Attention uses the simplified final form
// 4d^2 + ds + 3 d d_mlp; include_softmax adds the (5/2) h s/2 softmax term
// that the simplification drops.
std::int64_t layer_macs(const ArchSpec& spec, LayerKind kind, FlopMode mode,
                        bool include_softmax = false);

// F = 2 (d V + sum of layer MACs).
double flops_per_token(const ArchSpec& spec, FlopMode mode,
                       bool include_softmax = false);

enum class ComputeConvention { analytic, heuristic_6nd };

// analytic: 3 * F_fwd(chunkwise_train) * D; heuristic: 6 * N_non_emb * D.
double train_compute(const ArchSpec& spec, double tokens, ComputeConvention convention);
// Heuristic compute for an explicit parameter count (e.g. MoE active params).
double heuristic_compute(double params, double tokens);

struct StateSize {
  std::int64_t elements = 0;
  std::int64_t bytes = 0;
  double mib() const { return static_cast<double>(bytes) / (1024.0 * 1024.0); }
};

// Attention variants (MHA / GQA / SWA) store 2 * window * kv_heads * head_dim
// elements; pass the window for SWA and the sequence length otherwise.
StateSize attention_state_size(std::int64_t seq_or_window, int kv_heads, int head_dim,
                               int precision_bytes = 2);
StateSize gdn_state_size(int heads, int d_k, int d_v, int precision_bytes = 2);

}  // namespace hybridlab::archcount
