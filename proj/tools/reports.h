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

#ifndef PRUMERGE_TOOLS_REPORTS_H_
#define PRUMERGE_TOOLS_REPORTS_H_

#include <string>

#include "json.hpp"
#include "prumerge/cost_model.h"
#include "prumerge/pipeline.h"

namespace prumerge::tools {

using Json = nlohmann::ordered_json;

// Per-image report written by `reduce --stats`. Keys, in order:
//   mode, method, n, m, kept_fraction, compression_ratio, k,
//   q1, q3, iqr, lower_fence, upper_fence (null for baselines),
//   source_indices
Json reduce_report(const ReducedTokenSet& reduced, ReductionMode mode);

// Reads back the fields corpus_stats needs from a reduce report.
ImageStats image_stats_from_report(const Json& report);

// Flat object: images, n_mean, m_mean, m_min, m_max, kept_fraction_mean,
// kept_fraction_min, kept_fraction_max, compression_ratio.
Json corpus_report(const CorpusSummary& summary);

// model, hardware, bytes_per_param, full{...}, reduced{...}, flops_ratio,
// memory_ratio, time_ratio. Each cost block holds n_tokens, flops_total,
// prefill_time_s, total_memory_bytes, weight_bytes, kv_bytes,
// activation_bytes.
Json cost_report_json(const CostComparison& comparison,
                      const std::string& model_name,
                      const std::string& hardware_name,
                      const ModelProfile& model);

}  // namespace prumerge::tools

#endif  // PRUMERGE_TOOLS_REPORTS_H_
