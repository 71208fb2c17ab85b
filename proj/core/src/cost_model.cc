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

#include "prumerge/cost_model.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "prumerge/error.h"

namespace prumerge {

namespace {

using KeyValues = std::map<std::string, std::string, std::less<>>;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

KeyValues parse_key_values(std::string_view text) {
  KeyValues out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{}
                                         : text.substr(eol + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw_invalid("profile line " + std::to_string(line_no) +
                    ": expected key = value");
    }
    out[std::string(trim(line.substr(0, eq)))] =
        std::string(trim(line.substr(eq + 1)));
  }
  return out;
}

const std::string& require_key(const KeyValues& kv, std::string_view key) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw_invalid("profile is missing key: " + std::string(key));
  return it->second;
}

double parse_number(const std::string& text, std::string_view key) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw_invalid("profile key " + std::string(key) + ": bad number '" +
                  text + "'");
  }
  return value;
}

std::size_t parse_count(const KeyValues& kv, std::string_view key) {
  const double v = parse_number(require_key(kv, key), key);
  if (v < 1 || v != std::floor(v)) {
    throw_invalid("profile key " + std::string(key) +
                  " must be a positive integer");
  }
  return static_cast<std::size_t>(v);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

double ffn_matrices(FfnKind kind) {
  return kind == FfnKind::kGatedThreeMatrix ? 3.0 : 2.0;
}

}  // namespace

void validate_model(const ModelProfile& m) {
  if (m.n_layers == 0 || m.d_model == 0 || m.n_heads == 0 || m.d_ff == 0 ||
      m.n_vocab == 0 || !(m.n_params > 0.0)) {
    throw_invalid("model profile fields must be positive");
  }
  constexpr double kWidths[] = {0.5, 1.0, 2.0, 4.0};
  if (std::find(std::begin(kWidths), std::end(kWidths), m.bytes_per_param) ==
      std::end(kWidths)) {
    throw_invalid("bytes_per_param must be one of 0.5, 1, 2, 4");
  }
  if (!(m.bytes_per_activation > 0.0)) {
    throw_invalid("bytes_per_activation must be positive");
  }
}

void validate_hardware(const HardwareProfile& hw) {
  if (!(hw.peak_flops > 0.0) || !(hw.mem_bandwidth > 0.0)) {
    throw_invalid("hardware rates must be positive");
  }
}

ModelProfile model_preset(std::string_view name) {
  ModelProfile m;
  if (name == "7b") {
    m.n_layers = 32;
    m.d_model = 4096;
    m.n_heads = 32;
    m.d_ff = 11008;
    m.n_vocab = 32000;
    m.n_params = 7.06e9;  // Vicuna-7B + CLIP ViT-L/336 + projector
  } else if (name == "13b") {
    m.n_layers = 40;
    m.d_model = 5120;
    m.n_heads = 40;
    m.d_ff = 13824;
    m.n_vocab = 32000;
    m.n_params = 13.35e9;
  } else {
    throw_invalid("unknown model preset: " + std::string(name));
  }
  m.ffn_kind = FfnKind::kGatedThreeMatrix;
  m.bytes_per_param = 2.0;
  m.bytes_per_activation = 2.0;
  return m;
}

HardwareProfile hardware_preset(std::string_view name) {
  if (name == "v100") return HardwareProfile{112e12, 900e9};
  throw_invalid("unknown hardware preset: " + std::string(name));
}

ModelProfile parse_model_profile(std::string_view text) {
  const KeyValues kv = parse_key_values(text);
  ModelProfile m;
  m.n_layers = parse_count(kv, "n_layers");
  m.d_model = parse_count(kv, "d_model");
  m.n_heads = parse_count(kv, "n_heads");
  m.d_ff = parse_count(kv, "d_ff");
  m.n_vocab = parse_count(kv, "n_vocab");
  m.n_params = parse_number(require_key(kv, "n_params"), "n_params");
  const std::string& kind = require_key(kv, "ffn_kind");
  if (kind == "two_matrix") {
    m.ffn_kind = FfnKind::kTwoMatrix;
  } else if (kind == "gated_three_matrix") {
    m.ffn_kind = FfnKind::kGatedThreeMatrix;
  } else {
    throw_invalid("profile key ffn_kind: unknown value '" + kind + "'");
  }
  m.bytes_per_param =
      parse_number(require_key(kv, "bytes_per_param"), "bytes_per_param");
  if (const auto it = kv.find("bytes_per_activation"); it != kv.end()) {
    m.bytes_per_activation = parse_number(it->second, "bytes_per_activation");
  }
  validate_model(m);
  return m;
}

HardwareProfile parse_hardware_profile(std::string_view text) {
  const KeyValues kv = parse_key_values(text);
  HardwareProfile hw;
  hw.peak_flops = parse_number(require_key(kv, "peak_flops"), "peak_flops");
  hw.mem_bandwidth =
      parse_number(require_key(kv, "mem_bandwidth"), "mem_bandwidth");
  validate_hardware(hw);
  return hw;
}

ModelProfile load_model_profile(const std::string& path) {
  return parse_model_profile(read_file(path));
}

HardwareProfile load_hardware_profile(const std::string& path) {
  return parse_hardware_profile(read_file(path));
}

double prefill_flops(const ModelProfile& model, std::size_t n_tokens) {
  const double n = static_cast<double>(n_tokens);
  const double d = static_cast<double>(model.d_model);
  const double d_ff = static_cast<double>(model.d_ff);
  const double projections = 8.0 * n * d * d;
  const double attention = 4.0 * n * n * d;
  const double ffn = 2.0 * ffn_matrices(model.ffn_kind) * n * d * d_ff;
  const double vocab = 2.0 * n * d * static_cast<double>(model.n_vocab);
  return static_cast<double>(model.n_layers) * (projections + attention + ffn) +
         vocab;
}

MemoryFootprint memory_footprint(const ModelProfile& model,
                                 std::size_t n_tokens) {
  const double n = static_cast<double>(n_tokens);
  const double d = static_cast<double>(model.d_model);
  const double layers = static_cast<double>(model.n_layers);
  const double act = model.bytes_per_activation;
  const double ffn_tensors =
      model.ffn_kind == FfnKind::kGatedThreeMatrix ? 4.0 : 2.0;

  MemoryFootprint f;
  f.weight_bytes = model.n_params * model.bytes_per_param;
  f.kv_bytes = 2.0 * layers * n * d * act;
  const double per_layer_elements =
      8.0 * n * d + ffn_tensors * n * static_cast<double>(model.d_ff) +
      2.0 * static_cast<double>(model.n_heads) * n * n;
  f.activation_bytes = layers * per_layer_elements * act;
  f.total_bytes = f.weight_bytes + f.kv_bytes + f.activation_bytes;
  return f;
}

double roofline_time(double flops, double moved_bytes,
                     const HardwareProfile& hw) {
  validate_hardware(hw);
  if (flops < 0.0 || moved_bytes < 0.0) {
    throw_invalid("roofline inputs must be nonnegative");
  }
  return std::max(flops / hw.peak_flops, moved_bytes / hw.mem_bandwidth);
}

CostReport cost_report(const ModelProfile& model, const HardwareProfile& hw,
                       std::size_t n_tokens) {
  validate_model(model);
  validate_hardware(hw);
  const MemoryFootprint mem = memory_footprint(model, n_tokens);
  CostReport r;
  r.n_tokens = n_tokens;
  r.flops_total = prefill_flops(model, n_tokens);
  r.prefill_time_s = roofline_time(r.flops_total, mem.total_bytes, hw);
  r.total_memory_bytes = mem.total_bytes;
  r.activation_bytes = mem.activation_bytes;
  r.kv_bytes = mem.kv_bytes;
  r.weight_bytes = mem.weight_bytes;
  return r;
}

CostComparison cost_comparison(const ModelProfile& model,
                               const HardwareProfile& hw, std::size_t n_full,
                               std::size_t n_reduced) {
  if (n_reduced > n_full) {
    throw_invalid("reduced token count exceeds full token count");
  }
  CostComparison c;
  c.full = cost_report(model, hw, n_full);
  c.reduced = cost_report(model, hw, n_reduced);
  auto ratio = [](double reduced, double full) {
    return full > 0.0 ? reduced / full : 1.0;
  };
  c.flops_ratio = ratio(c.reduced.flops_total, c.full.flops_total);
  c.memory_ratio = ratio(c.reduced.total_memory_bytes, c.full.total_memory_bytes);
  c.time_ratio = ratio(c.reduced.prefill_time_s, c.full.prefill_time_s);
  return c;
}

}  // namespace prumerge
