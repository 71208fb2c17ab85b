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

#ifndef PRUMERGE_TOKEN_CORE_H_
#define PRUMERGE_TOKEN_CORE_H_

#include <cstddef>
#include <span>
#include <vector>

namespace prumerge {

// Spatial layout of the visual tokens, raster order (row-major).
struct Grid {
  std::size_t h = 0;
  std::size_t w = 0;

  std::size_t size() const { return h * w; }
  friend bool operator==(const Grid&, const Grid&) = default;
};

// One image's penultimate-layer tensors as consumed by the reduction:
// the class-token query, the spatial keys and the spatial output tokens.
//
// Layouts (row-major, single precision):
//   q_cls  [n_heads x d_k]
//   keys   [n_heads x n x d_k]
//   y      [n x d]
//
// Construction validates shapes and finiteness; the value is immutable
// afterwards.
class TokenSet {
 public:
  TokenSet(Grid grid, std::size_t d, std::size_t d_k, std::size_t n_heads,
           std::vector<float> q_cls, std::vector<float> keys,
           std::vector<float> y);

  std::size_t n() const { return grid_.size(); }
  std::size_t d() const { return d_; }
  std::size_t d_k() const { return d_k_; }
  std::size_t n_heads() const { return n_heads_; }
  const Grid& grid() const { return grid_; }

  std::span<const float> q_cls() const { return q_cls_; }
  std::span<const float> keys() const { return keys_; }
  std::span<const float> y() const { return y_; }

  std::span<const float> query(std::size_t head) const {
    return std::span<const float>(q_cls_).subspan(head * d_k_, d_k_);
  }
  std::span<const float> key(std::size_t head, std::size_t token) const {
    return std::span<const float>(keys_).subspan((head * n() + token) * d_k_,
                                                 d_k_);
  }
  std::span<const float> row(std::size_t token) const {
    return std::span<const float>(y_).subspan(token * d_, d_);
  }

  friend bool operator==(const TokenSet&, const TokenSet&) = default;

 private:
  Grid grid_;
  std::size_t d_;
  std::size_t d_k_;
  std::size_t n_heads_;
  std::vector<float> q_cls_;
  std::vector<float> keys_;
  std::vector<float> y_;
};

// Softmaxed class-to-spatial attention. Entries are >= 0 and sum to 1.
struct AttentionVector {
  std::vector<double> a;

  std::size_t size() const { return a.size(); }
  double operator[](std::size_t i) const { return a[i]; }
};

// Dense n x n key dot-product table, s(i, j) = k_i . k_j.
class SimilarityMatrix {
 public:
  SimilarityMatrix(std::size_t n, std::vector<double> values);

  std::size_t n() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const {
    return values_[i * n_ + j];
  }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(values_).subspan(i * n_, n_);
  }

 private:
  std::size_t n_;
  std::vector<double> values_;
};

// Numerically stable softmax of logits / sqrt(scale_dim). Sums and the
// exponentials run in double precision.
std::vector<double> scaled_softmax(std::span<const double> logits,
                                   std::size_t scale_dim);

// Per-head softmax(q_cls[h] . K[h]^T / sqrt(d_k)) over the spatial tokens,
// averaged over heads.
AttentionVector class_attention(const TokenSet& tokens);

// Key dot products with the heads concatenated per token.
SimilarityMatrix key_similarity(const TokenSet& tokens);

}  // namespace prumerge

#endif  // PRUMERGE_TOKEN_CORE_H_
