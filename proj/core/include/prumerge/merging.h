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

#ifndef PRUMERGE_MERGING_H_
#define PRUMERGE_MERGING_H_

#include <cstddef>
#include <span>
#include <vector>

#include "prumerge/selection.h"
#include "prumerge/token_core.h"

namespace prumerge {

struct Cluster {
  std::size_t center = 0;
  std::vector<std::size_t> members;  // similarity order, center included
  std::vector<double> weights;       // one per member
};

struct MergeResult {
  std::size_t d = 0;
  std::vector<double> tokens;  // [m x d]
  std::vector<Cluster> clusters;

  std::size_t m() const { return clusters.size(); }
  std::span<const double> token(std::size_t i) const {
    return std::span<const double>(tokens).subspan(i * d, d);
  }
};

enum class ClusterMode {
  kKnn,        // independent k-NN per center; clusters may overlap
  kPartition,  // each token joins its most similar center
};

struct MergeOptions {
  // Normalize the attention weights inside each cluster. When off, the raw
  // class attention values are used as weights.
  bool normalize_weights = true;
  ClusterMode cluster_mode = ClusterMode::kKnn;
  // Worker threads for per-center work. Output does not depend on it.
  std::size_t threads = 1;
};

// The k most similar tokens to `center`, descending similarity, ties to the
// lower index. The center competes like any other token.
std::vector<std::size_t> knn_members(std::size_t center,
                                     const SimilarityMatrix& similarity,
                                     std::size_t k);

// Cluster of `center`: the center itself followed by the k - 1 most similar
// other tokens (descending similarity, ties to the lower index). Equals
// knn_members whenever the center's self-similarity is its row maximum,
// and keeps the center in its cluster when a larger-norm key outranks it.
std::vector<std::size_t> cluster_members(std::size_t center,
                                         const SimilarityMatrix& similarity,
                                         std::size_t k);

// Attention-weighted average of the member rows of `y` (row length d).
// Falls back to uniform weights when the members carry no attention.
// `weights_out`, when given, receives the weights actually applied.
std::vector<double> merge_cluster(std::span<const std::size_t> members,
                                  const AttentionVector& attention,
                                  std::span<const float> y, std::size_t d,
                                  bool normalize_weights = true,
                                  std::vector<double>* weights_out = nullptr);

// For every selected center builds its cluster over key similarity and
// replaces the center with the merged token. Output follows ascending
// center order.
MergeResult token_supplement(const SelectionResult& selection,
                             const TokenSet& tokens,
                             const AttentionVector& attention, std::size_t k,
                             const MergeOptions& options = {});

}  // namespace prumerge

#endif  // PRUMERGE_MERGING_H_
