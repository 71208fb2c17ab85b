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

#include "prumerge/merging.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>

#include "prumerge/error.h"
#include "parallel.h"

namespace prumerge {

namespace {

// Centers partition the tokens; each non-center token goes to the center
// with the highest similarity, ties to the lower center.
std::vector<std::vector<std::size_t>> partition_members(
    std::span<const std::size_t> centers, const SimilarityMatrix& s) {
  const std::size_t n = s.n();
  std::vector<std::vector<std::size_t>> members(centers.size());
  std::vector<bool> is_center(n, false);
  for (std::size_t c = 0; c < centers.size(); ++c) {
    is_center[centers[c]] = true;
    members[c].push_back(centers[c]);
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (is_center[j]) continue;
    std::size_t best = 0;
    for (std::size_t c = 1; c < centers.size(); ++c) {
      if (s(centers[c], j) > s(centers[best], j)) best = c;
    }
    members[best].push_back(j);
  }
  return members;
}

}  // namespace

std::vector<std::size_t> knn_members(std::size_t center,
                                     const SimilarityMatrix& similarity,
                                     std::size_t k) {
  const std::size_t n = similarity.n();
  if (center >= n) throw_invalid("center index out of range");
  if (k < 1 || k > n) {
    throw_invalid("k must be in [1, n], got " + std::to_string(k));
  }
  const auto row = similarity.row(center);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::partial_sort(order.begin(), order.begin() + k, order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (row[a] != row[b]) return row[a] > row[b];
                      return a < b;
                    });
  order.resize(k);
  return order;
}

std::vector<std::size_t> cluster_members(std::size_t center,
                                         const SimilarityMatrix& similarity,
                                         std::size_t k) {
  const std::size_t n = similarity.n();
  if (center >= n) throw_invalid("center index out of range");
  if (k < 1 || k > n) {
    throw_invalid("k must be in [1, n], got " + std::to_string(k));
  }
  const auto row = similarity.row(center);
  std::vector<std::size_t> others;
  others.reserve(n - 1);
  for (std::size_t j = 0; j < n; ++j) {
    if (j != center) others.push_back(j);
  }
  std::partial_sort(others.begin(), others.begin() + (k - 1), others.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (row[a] != row[b]) return row[a] > row[b];
                      return a < b;
                    });
  std::vector<std::size_t> members;
  members.reserve(k);
  members.push_back(center);
  members.insert(members.end(), others.begin(), others.begin() + (k - 1));
  return members;
}

std::vector<double> merge_cluster(std::span<const std::size_t> members,
                                  const AttentionVector& attention,
                                  std::span<const float> y, std::size_t d,
                                  bool normalize_weights,
                                  std::vector<double>* weights_out) {
  if (members.empty()) throw_invalid("cluster has no members");
  if (d == 0 || y.size() % d != 0) throw_invalid("bad embedding row length");
  const std::size_t n = y.size() / d;
  for (std::size_t j : members) {
    if (j >= n || j >= attention.size()) {
      throw_invalid("cluster member out of range");
    }
  }

  std::vector<double> weights(members.size());
  double total = 0.0;
  for (std::size_t q = 0; q < members.size(); ++q) {
    weights[q] = attention[members[q]];
    total += weights[q];
  }
  if (total <= 0.0) {
    std::fill(weights.begin(), weights.end(),
              1.0 / static_cast<double>(members.size()));
  } else if (normalize_weights) {
    for (double& w : weights) w /= total;
  }

  std::vector<double> merged(d, 0.0);
  for (std::size_t q = 0; q < members.size(); ++q) {
    const float* row = y.data() + members[q] * d;
    for (std::size_t c = 0; c < d; ++c) {
      merged[c] += weights[q] * static_cast<double>(row[c]);
    }
  }
  if (weights_out != nullptr) *weights_out = std::move(weights);
  return merged;
}

MergeResult token_supplement(const SelectionResult& selection,
                             const TokenSet& tokens,
                             const AttentionVector& attention, std::size_t k,
                             const MergeOptions& options) {
  const std::size_t n = tokens.n();
  validate_selection(selection, n);
  if (attention.size() != n) throw_invalid("attention length != n");
  if (k < 1 || k > n) {
    throw_invalid("k must be in [1, n], got " + std::to_string(k));
  }

  const auto& centers = selection.indices;
  const std::size_t m = centers.size();
  const std::size_t d = tokens.d();

  MergeResult result;
  result.d = d;
  result.tokens.assign(m * d, 0.0);
  result.clusters.resize(m);

  // k = 1 keeps every center as is; the similarity table is not needed.
  const bool needs_similarity =
      k > 1 || options.cluster_mode == ClusterMode::kPartition;
  std::optional<SimilarityMatrix> similarity;
  std::vector<std::vector<std::size_t>> partitions;
  if (needs_similarity) {
    similarity.emplace(key_similarity(tokens));
    if (options.cluster_mode == ClusterMode::kPartition) {
      partitions = partition_members(centers, *similarity);
    }
  }

  internal::parallel_for(m, options.threads, [&](std::size_t c) {
    Cluster& cluster = result.clusters[c];
    cluster.center = centers[c];
    if (options.cluster_mode == ClusterMode::kPartition) {
      cluster.members = partitions[c];
    } else if (k == 1) {
      cluster.members = {centers[c]};
    } else {
      cluster.members = cluster_members(centers[c], *similarity, k);
    }
    const auto merged =
        merge_cluster(cluster.members, attention, tokens.y(), d,
                      options.normalize_weights, &cluster.weights);
    std::copy(merged.begin(), merged.end(), result.tokens.begin() + c * d);
  });
  return result;
}

}  // namespace prumerge
