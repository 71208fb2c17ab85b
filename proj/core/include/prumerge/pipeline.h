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

#ifndef PRUMERGE_PIPELINE_H_
#define PRUMERGE_PIPELINE_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "prumerge/merging.h"
#include "prumerge/selection.h"
#include "prumerge/token_core.h"

namespace prumerge {

enum class ReductionMode {
  kPruMerge,
  kPruMergePlus,
  kSequential,
  kSpatial,
};

std::string_view mode_name(ReductionMode mode);

struct PipelineConfig {
  ReductionMode mode = ReductionMode::kPruMerge;
  // Cluster size; nullopt means ceil(n / m) per image.
  std::optional<std::size_t> k;
  std::size_t floor = 1;
  // PruMerge+ supplement ratio; nullopt means m / n of the outlier step.
  std::optional<double> supplement_ratio;
  // Sequential baseline token count.
  std::size_t budget = 40;
  // Spatial baseline sample grid.
  std::size_t grid_rows = 6;
  std::size_t grid_cols = 6;
  // Baselines use k = 1 unless merging is requested explicitly.
  bool merge_baselines = false;
  bool normalize_weights = true;
  FenceSides fence_sides = FenceSides::kUpper;
  ClusterMode cluster_mode = ClusterMode::kKnn;
  std::size_t threads = 1;
};

// Throws kInvalidArgument when a field is out of range for its mode.
void validate_config(const PipelineConfig& config);

struct ImageStats {
  std::size_t n = 0;
  std::size_t m = 0;
  double kept_fraction = 0.0;  // m / n
  SelectionMethod method = SelectionMethod::kIqr;
  std::size_t k = 0;  // cluster size actually used
};

struct ReducedTokenSet {
  std::size_t d = 0;
  std::vector<double> tokens;  // [m x d]
  std::vector<std::size_t> source_indices;
  SelectionResult selection;
  std::vector<Cluster> clusters;
  ImageStats stats;

  std::span<const double> token(std::size_t i) const {
    return std::span<const double>(tokens).subspan(i * d, d);
  }
};

// class attention -> outlier selection -> k-NN merge.
ReducedTokenSet run_prumerge(const TokenSet& tokens,
                             const PipelineConfig& config);

// As run_prumerge with the spatially uniform supplement added before merge.
ReducedTokenSet run_prumerge_plus(const TokenSet& tokens,
                                  const PipelineConfig& config);

// Dispatches on config.mode (baselines included).
ReducedTokenSet reduce(const TokenSet& tokens, const PipelineConfig& config);

// Reduces each image; images may run on up to `threads` workers. Results
// are in input order.
std::vector<ReducedTokenSet> reduce_corpus(std::span<const TokenSet> images,
                                           const PipelineConfig& config,
                                           std::size_t threads = 1);

struct CorpusSummary {
  std::size_t images = 0;
  double n_mean = 0.0;
  double m_mean = 0.0;
  std::size_t m_min = 0;
  std::size_t m_max = 0;
  double kept_fraction_mean = 0.0;
  double kept_fraction_min = 0.0;
  double kept_fraction_max = 0.0;
  // mean(n) / mean(m)
  double compression_ratio = 0.0;
};

CorpusSummary corpus_stats(std::span<const ImageStats> stats);
CorpusSummary corpus_stats(std::span<const ReducedTokenSet> results);

}  // namespace prumerge

#endif  // PRUMERGE_PIPELINE_H_
