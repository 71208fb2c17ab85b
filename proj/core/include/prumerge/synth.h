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

#ifndef PRUMERGE_SYNTH_H_
#define PRUMERGE_SYNTH_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "prumerge/token_core.h"

namespace prumerge {

// Parameters of a synthetic image whose class attention is near-uniform
// except at `n_spikes` planted tokens.
struct SynthSpec {
  Grid grid{24, 24};
  std::size_t d = 32;
  std::size_t d_k = 16;
  std::size_t n_heads = 1;
  std::size_t n_spikes = 32;
  double spike_gain = 6.0;  // scaled-logit boost of a spike
  std::size_t cluster_count = 4;
  std::uint64_t seed = 0;
};

void validate_synth_spec(const SynthSpec& spec);

// Spike positions: floor((s + 0.5) n / n_spikes) for s < n_spikes.
std::vector<std::size_t> planted_spikes(const SynthSpec& spec);

// Planted cluster of token i: i * cluster_count / n (horizontal bands).
std::size_t planted_cluster(const SynthSpec& spec, std::size_t token);

// Deterministic for a given spec. The generator is std::mt19937_64 seeded
// with `seed`; uniforms take the top 53 bits, normals use Box-Muller. The
// draw order is documented in synth.cc and is part of the format contract
// for golden files.
TokenSet synth_generate(const SynthSpec& spec);

// Spike counts of the bundled evaluation corpus (mean 32 on a 24x24 grid).
std::vector<std::size_t> corpus_spike_counts();

// The bundled corpus: one spec per spike count with seeds base_seed + i.
std::vector<SynthSpec> corpus_specs(std::uint64_t base_seed = 2024);

}  // namespace prumerge

#endif  // PRUMERGE_SYNTH_H_
