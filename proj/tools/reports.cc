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

#include "reports.h"

#include "prumerge/error.h"

namespace prumerge::tools {

namespace {

Json cost_block(const CostReport& r) {
  Json j;
  j["n_tokens"] = r.n_tokens;
  j["flops_total"] = r.flops_total;
  j["prefill_time_s"] = r.prefill_time_s;
  j["total_memory_bytes"] = r.total_memory_bytes;
  j["weight_bytes"] = r.weight_bytes;
  j["kv_bytes"] = r.kv_bytes;
  j["activation_bytes"] = r.activation_bytes;
  return j;
}

}  // namespace

Json reduce_report(const ReducedTokenSet& reduced, ReductionMode mode) {
  const ImageStats& s = reduced.stats;
  Json j;
  j["mode"] = std::string(mode_name(mode));
  j["method"] = std::string(method_name(s.method));
  j["n"] = s.n;
  j["m"] = s.m;
  j["kept_fraction"] = s.kept_fraction;
  j["compression_ratio"] =
      static_cast<double>(s.n) / static_cast<double>(s.m);
  j["k"] = s.k;
  if (const auto& f = reduced.selection.fences) {
    j["q1"] = f->q1;
    j["q3"] = f->q3;
    j["iqr"] = f->iqr;
    j["lower_fence"] = f->lower;
    j["upper_fence"] = f->upper;
  } else {
    for (const char* key : {"q1", "q3", "iqr", "lower_fence", "upper_fence"}) {
      j[key] = nullptr;
    }
  }
  j["source_indices"] = reduced.source_indices;
  return j;
}

ImageStats image_stats_from_report(const Json& report) {
  try {
    ImageStats s;
    s.n = report.at("n").get<std::size_t>();
    s.m = report.at("m").get<std::size_t>();
    s.kept_fraction = report.at("kept_fraction").get<double>();
    s.k = report.value("k", std::size_t{0});
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("malformed reduce report: ") + e.what());
  }
}

Json corpus_report(const CorpusSummary& summary) {
  Json j;
  j["images"] = summary.images;
  j["n_mean"] = summary.n_mean;
  j["m_mean"] = summary.m_mean;
  j["m_min"] = summary.m_min;
  j["m_max"] = summary.m_max;
  j["kept_fraction_mean"] = summary.kept_fraction_mean;
  j["kept_fraction_min"] = summary.kept_fraction_min;
  j["kept_fraction_max"] = summary.kept_fraction_max;
  j["compression_ratio"] = summary.compression_ratio;
  return j;
}

Json cost_report_json(const CostComparison& comparison,
                      const std::string& model_name,
                      const std::string& hardware_name,
                      const ModelProfile& model) {
  Json j;
  j["model"] = model_name;
  j["hardware"] = hardware_name;
  j["bytes_per_param"] = model.bytes_per_param;
  j["full"] = cost_block(comparison.full);
  j["reduced"] = cost_block(comparison.reduced);
  j["flops_ratio"] = comparison.flops_ratio;
  j["memory_ratio"] = comparison.memory_ratio;
  j["time_ratio"] = comparison.time_ratio;
  return j;
}

}  // namespace prumerge::tools
