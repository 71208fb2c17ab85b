// Copyright 2026 The PruMerge Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PRUMERGE_COST_MODEL_H_
#define PRUMERGE_COST_MODEL_H_

#include <cstddef>
#include <map>
#include <string>
#include <string_view>

namespace prumerge {

enum class FfnKind {
  kTwoMatrix,        // up, down
  kGatedThreeMatrix, // gate, up, down (SwiGLU)
};

// Decoder-only LLM shape used for prefill accounting.
struct ModelProfile {
  std::size_t n_layers = 0;
  std::size_t d_model = 0;
  std::size_t n_heads = 0;
  std::size_t d_ff = 0;
  std::size_t n_vocab = 0;
  double n_params = 0.0;
  FfnKind ffn_kind = FfnKind::kGatedThreeMatrix;
  double bytes_per_param = 2.0;     // 2 FP16, 0.5 INT4
  double bytes_per_activation = 2.0;
};

struct HardwareProfile {
  double peak_flops = 0.0;     // op/s
  double mem_bandwidth = 0.0;  // byte/s
};

void validate_model(const ModelProfile& model);
void validate_hardware(const HardwareProfile& hw);

// Built-in presets: "7b", "13b" (LLaVA-1.5 with Vicuna backbones, FP16)
// and "v100".
ModelProfile model_preset(std::string_view name);
HardwareProfile hardware_preset(std::string_view name);

// Profiles from `key = value` text, '#' starts a comment. Model keys:
// n_layers d_model n_heads d_ff n_vocab n_params ffn_kind bytes_per_param
// [bytes_per_activation]; hardware keys: peak_flops mem_bandwidth.
ModelProfile parse_model_profile(std::string_view text);
HardwareProfile parse_hardware_profile(std::string_view text);
ModelProfile load_model_profile(const std::string& path);
HardwareProfile load_hardware_profile(const std::string& path);

// Prefill FLOPs with one multiply-accumulate counted as 2 FLOPs:
//   per layer  8 n d^2 + 4 n^2 d + {4,6} n d d_ff
//   plus       2 n d n_vocab for the vocabulary projection.
double prefill_flops(const ModelProfile& model, std::size_t n_tokens);

struct MemoryFootprint {
  double weight_bytes = 0.0;
  double kv_bytes = 0.0;
  double activation_bytes = 0.0;
  double total_bytes = 0.0;
};

// weights + KV cache + stored prefill activations, summed over layers.
// Stored activations per layer: 8 n d (norms, q, k, v, context, o-proj,
// ffn norm, down-proj), {2,4} n d_ff (ffn intermediates) and 2 H n^2
// (attention scores and probabilities).
MemoryFootprint memory_footprint(const ModelProfile& model,
                                 std::size_t n_tokens);

// max(flops / peak_flops, moved_bytes / mem_bandwidth) in seconds.
double roofline_time(double flops, double moved_bytes,
                     const HardwareProfile& hw);

struct CostReport {
  std::size_t n_tokens = 0;
  double flops_total = 0.0;
  double prefill_time_s = 0.0;
  double total_memory_bytes = 0.0;
  double activation_bytes = 0.0;
  double kv_bytes = 0.0;
  double weight_bytes = 0.0;
};

CostReport cost_report(const ModelProfile& model, const HardwareProfile& hw,
                       std::size_t n_tokens);

struct CostComparison {
  CostReport full;
  CostReport reduced;
  // reduced / full
  double flops_ratio = 1.0;
  double memory_ratio = 1.0;
  double time_ratio = 1.0;
};

CostComparison cost_comparison(const ModelProfile& model,
                               const HardwareProfile& hw, std::size_t n_full,
                               std::size_t n_reduced);

}  // namespace prumerge

#endif  // PRUMERGE_COST_MODEL_H_
