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

#include "prumerge/pipeline.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "prumerge/error.h"
#include "parallel.h"

namespace prumerge {

namespace {

std::size_t auto_k(std::size_t n, std::size_t m) { return (n + m - 1) / m; }

ReducedTokenSet finish(const TokenSet& tokens, const AttentionVector& attention,
                       SelectionResult selection, std::size_t k,
                       const PipelineConfig& config) {
  const std::size_t n = tokens.n();
  k = std::min(k, n);
  MergeOptions options;
  options.normalize_weights = config.normalize_weights;
  options.cluster_mode = config.cluster_mode;
  options.threads = config.threads;
  MergeResult merged =
      token_supplement(selection, tokens, attention, k, options);

  ReducedTokenSet out;
  out.d = tokens.d();
  out.tokens = std::move(merged.tokens);
  out.clusters = std::move(merged.clusters);
  out.source_indices = selection.indices;
  out.stats.n = n;
  out.stats.m = selection.indices.size();
  out.stats.kept_fraction =
      static_cast<double>(out.stats.m) / static_cast<double>(n);
  out.stats.method = selection.method;
  out.stats.k = k;
  out.selection = std::move(selection);
  return out;
}

ReducedTokenSet run_baseline(const TokenSet& tokens,
                             const PipelineConfig& config) {
  SelectionResult selection =
      config.mode == ReductionMode::kSequential
          ? sequential_baseline(tokens.n(), config.budget)
          : spatial_grid_baseline(tokens.grid(), config.grid_rows,
                                  config.grid_cols);
  const AttentionVector attention = class_attention(tokens);
  std::size_t k = 1;
  if (config.merge_baselines) {
    k = config.k.value_or(auto_k(tokens.n(), selection.m()));
  }
  return finish(tokens, attention, std::move(selection), k, config);
}

}  // namespace

std::string_view mode_name(ReductionMode mode) {
  switch (mode) {
    case ReductionMode::kPruMerge: return "prumerge";
    case ReductionMode::kPruMergePlus: return "prumerge+";
    case ReductionMode::kSequential: return "sequential";
    case ReductionMode::kSpatial: return "spatial";
  }
  return "unknown";
}

void validate_config(const PipelineConfig& config) {
  if (config.floor < 1) throw_invalid("floor must be >= 1");
  if (config.k && *config.k < 1) throw_invalid("k must be >= 1");
  if (config.supplement_ratio &&
      (!(*config.supplement_ratio > 0.0) || *config.supplement_ratio > 1.0)) {
    throw_invalid("supplement ratio must be in (0, 1]");
  }
  if (config.budget < 1) throw_invalid("budget must be >= 1");
  if (config.grid_rows < 1 || config.grid_cols < 1) {
    throw_invalid("spatial grid must be at least 1x1");
  }
  if (config.threads < 1) throw_invalid("threads must be >= 1");
}

ReducedTokenSet run_prumerge(const TokenSet& tokens,
                             const PipelineConfig& config) {
  validate_config(config);
  if (config.floor > tokens.n()) throw_invalid("floor exceeds token count");
  const AttentionVector attention = class_attention(tokens);
  SelectionResult selection =
      select_outliers(attention, config.floor, config.fence_sides);
  const std::size_t k = config.k.value_or(auto_k(tokens.n(), selection.m()));
  return finish(tokens, attention, std::move(selection), k, config);
}

ReducedTokenSet run_prumerge_plus(const TokenSet& tokens,
                                  const PipelineConfig& config) {
  validate_config(config);
  if (config.floor > tokens.n()) throw_invalid("floor exceeds token count");
  const AttentionVector attention = class_attention(tokens);
  const SelectionResult outliers =
      select_outliers(attention, config.floor, config.fence_sides);
  const double ratio = config.supplement_ratio.value_or(
      static_cast<double>(outliers.m()) / static_cast<double>(tokens.n()));
  SelectionResult selection =
      uniform_spatial_supplement(outliers, tokens.grid(), ratio);
  const std::size_t k = config.k.value_or(auto_k(tokens.n(), selection.m()));
  return finish(tokens, attention, std::move(selection), k, config);
}

ReducedTokenSet reduce(const TokenSet& tokens, const PipelineConfig& config) {
  switch (config.mode) {
    case ReductionMode::kPruMerge: return run_prumerge(tokens, config);
    case ReductionMode::kPruMergePlus: return run_prumerge_plus(tokens, config);
    case ReductionMode::kSequential:
    case ReductionMode::kSpatial:
      validate_config(config);
      return run_baseline(tokens, config);
  }
  throw_invalid("unknown reduction mode");
}

std::vector<ReducedTokenSet> reduce_corpus(std::span<const TokenSet> images,
                                           const PipelineConfig& config,
                                           std::size_t threads) {
  std::vector<ReducedTokenSet> out(images.size());
  PipelineConfig per_image = config;
  // Parallelism goes to the image level; each image runs sequentially.
  if (threads > 1) per_image.threads = 1;
  internal::parallel_for(images.size(), threads, [&](std::size_t i) {
    out[i] = reduce(images[i], per_image);
  });
  return out;
}

CorpusSummary corpus_stats(std::span<const ImageStats> stats) {
  if (stats.empty()) throw_invalid("corpus_stats of an empty corpus");
  CorpusSummary s;
  s.images = stats.size();
  s.m_min = stats.front().m;
  s.m_max = stats.front().m;
  s.kept_fraction_min = stats.front().kept_fraction;
  s.kept_fraction_max = stats.front().kept_fraction;
  double n_sum = 0.0;
  double m_sum = 0.0;
  double kept_sum = 0.0;
  for (const ImageStats& img : stats) {
    if (img.n == 0 || img.m == 0 || img.m > img.n) {
      throw_invalid("image stats need 1 <= m <= n");
    }
    n_sum += static_cast<double>(img.n);
    m_sum += static_cast<double>(img.m);
    kept_sum += img.kept_fraction;
    s.m_min = std::min(s.m_min, img.m);
    s.m_max = std::max(s.m_max, img.m);
    s.kept_fraction_min = std::min(s.kept_fraction_min, img.kept_fraction);
    s.kept_fraction_max = std::max(s.kept_fraction_max, img.kept_fraction);
  }
  const double count = static_cast<double>(stats.size());
  s.n_mean = n_sum / count;
  s.m_mean = m_sum / count;
  s.kept_fraction_mean = kept_sum / count;
  s.compression_ratio = n_sum / m_sum;
  return s;
}

CorpusSummary corpus_stats(std::span<const ReducedTokenSet> results) {
  std::vector<ImageStats> stats;
  stats.reserve(results.size());
  for (const auto& r : results) stats.push_back(r.stats);
  return corpus_stats(stats);
}

}  // namespace prumerge
