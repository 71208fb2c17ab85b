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

#include "prumerge/token_core.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "prumerge/error.h"

namespace prumerge {

namespace {

void require_size(const std::vector<float>& v, std::size_t expected,
                  const char* name) {
  if (v.size() != expected) {
    throw_invalid(std::string(name) + ": expected " +
                  std::to_string(expected) + " values, got " +
                  std::to_string(v.size()));
  }
}

void require_finite(const std::vector<float>& v, const char* name) {
  for (float x : v) {
    if (!std::isfinite(x)) {
      throw Error(ErrorCode::kNonFinite,
                  std::string("non-finite value in ") + name);
    }
  }
}

double dot(std::span<const float> a, std::span<const float> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  }
  return acc;
}

}  // namespace

TokenSet::TokenSet(Grid grid, std::size_t d, std::size_t d_k,
                   std::size_t n_heads, std::vector<float> q_cls,
                   std::vector<float> keys, std::vector<float> y)
    : grid_(grid),
      d_(d),
      d_k_(d_k),
      n_heads_(n_heads),
      q_cls_(std::move(q_cls)),
      keys_(std::move(keys)),
      y_(std::move(y)) {
  if (grid_.h == 0 || grid_.w == 0 || d_ == 0 || d_k_ == 0 || n_heads_ == 0) {
    throw_invalid("token set dimensions must be >= 1");
  }
  const std::size_t n = grid_.size();
  require_size(q_cls_, n_heads_ * d_k_, "q_cls");
  require_size(keys_, n_heads_ * n * d_k_, "keys");
  require_size(y_, n * d_, "y");
  require_finite(q_cls_, "q_cls");
  require_finite(keys_, "keys");
  require_finite(y_, "y");
}

SimilarityMatrix::SimilarityMatrix(std::size_t n, std::vector<double> values)
    : n_(n), values_(std::move(values)) {
  if (values_.size() != n_ * n_) {
    throw_invalid("similarity matrix must hold n*n values");
  }
}

std::vector<double> scaled_softmax(std::span<const double> logits,
                                   std::size_t scale_dim) {
  if (logits.empty()) throw_invalid("empty logits");
  if (scale_dim == 0) throw_invalid("scale_dim must be >= 1");
  for (double x : logits) {
    if (!std::isfinite(x)) throw_invalid("non-finite logit");
  }
  const double inv_scale = 1.0 / std::sqrt(static_cast<double>(scale_dim));
  const double max_logit = *std::max_element(logits.begin(), logits.end());

  std::vector<double> out(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp((logits[i] - max_logit) * inv_scale);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

AttentionVector class_attention(const TokenSet& tokens) {
  const std::size_t n = tokens.n();
  const std::size_t heads = tokens.n_heads();
  AttentionVector result{std::vector<double>(n, 0.0)};
  std::vector<double> logits(n);
  for (std::size_t h = 0; h < heads; ++h) {
    const auto q = tokens.query(h);
    for (std::size_t i = 0; i < n; ++i) logits[i] = dot(q, tokens.key(h, i));
    const auto probs = scaled_softmax(logits, tokens.d_k());
    if (heads == 1) {
      result.a = probs;
      return result;
    }
    for (std::size_t i = 0; i < n; ++i) result.a[i] += probs[i];
  }
  const double inv_heads = 1.0 / static_cast<double>(heads);
  for (double& v : result.a) v *= inv_heads;
  return result;
}

SimilarityMatrix key_similarity(const TokenSet& tokens) {
  const std::size_t n = tokens.n();
  const std::size_t d_k = tokens.d_k();
  const std::size_t heads = tokens.n_heads();
  // Widen once; keys stay head-major, [heads x n x d_k].
  const std::vector<double> k(tokens.keys().begin(), tokens.keys().end());
  std::vector<double> s(n * n, 0.0);
  // Four columns at a time for independent accumulators. Each entry is still
  // summed per head in coordinate order, then across heads, as in dot().
  constexpr std::size_t kBlock = 4;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = i;
    for (; j + kBlock <= n; j += kBlock) {
      double total[kBlock] = {};
      for (std::size_t h = 0; h < heads; ++h) {
        const double* ki = &k[(h * n + i) * d_k];
        const double* kj = &k[(h * n + j) * d_k];
        double acc[kBlock] = {};
        for (std::size_t c = 0; c < d_k; ++c) {
          for (std::size_t b = 0; b < kBlock; ++b) acc[b] += ki[c] * kj[b * d_k + c];
        }
        for (std::size_t b = 0; b < kBlock; ++b) total[b] += acc[b];
      }
      for (std::size_t b = 0; b < kBlock; ++b) {
        s[i * n + j + b] = total[b];
        s[(j + b) * n + i] = total[b];
      }
    }
    for (; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t h = 0; h < heads; ++h) {
        acc += dot(tokens.key(h, i), tokens.key(h, j));
      }
      s[i * n + j] = acc;
      s[j * n + i] = acc;
    }
  }
  return SimilarityMatrix(n, std::move(s));
}

}  // namespace prumerge
