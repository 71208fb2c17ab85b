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

#include "prumerge/synth.h"

#include <gtest/gtest.h>

#include <numeric>

#include "oracles.h"
#include "prumerge/error.h"
#include "prumerge/selection.h"
#include "prumerge/token_dump.h"

namespace prumerge {
namespace {

TEST(Synth, SameSeedIsBitIdentical) {
  SynthSpec spec;
  spec.seed = 99;
  spec.n_heads = 2;
  EXPECT_EQ(encode_token_dump(synth_generate(spec)),
            encode_token_dump(synth_generate(spec)));
  SynthSpec other = spec;
  other.seed = 100;
  EXPECT_NE(encode_token_dump(synth_generate(spec)),
            encode_token_dump(synth_generate(other)));
}

TEST(Synth, NoSpikesIsNearUniform) {
  SynthSpec spec;
  spec.n_spikes = 0;
  spec.seed = 5;
  const auto a = class_attention(synth_generate(spec));
  for (double v : a.a) EXPECT_NEAR(v * 576.0, 1.0, 0.15);
  const auto s = select_outliers(a, 1);
  EXPECT_EQ(s.method, SelectionMethod::kFloorFallback);
  EXPECT_EQ(s.m(), 1u);
}

TEST(Synth, ThirtyTwoSpikesSelectedExactly) {
  SynthSpec spec;
  spec.n_spikes = 32;
  spec.spike_gain = 6.0;
  spec.seed = 17;
  const auto a = class_attention(synth_generate(spec));
  const auto planted = planted_spikes(spec);
  EXPECT_EQ(testing::selection_oracle(a.a, 1), planted);
  EXPECT_EQ(select_outliers(a, 1).indices, planted);
}

TEST(Synth, MultiHeadAndOddShapes) {
  for (std::size_t heads : {1, 3, 8}) {
    SynthSpec spec;
    spec.grid = Grid{7, 13};
    spec.d = 5;
    spec.d_k = 3;
    spec.n_heads = heads;
    spec.n_spikes = 6;
    spec.cluster_count = 3;
    spec.seed = heads;
    const auto t = synth_generate(spec);
    EXPECT_EQ(t.n(), 91u);
    EXPECT_EQ(select_outliers(class_attention(t), 1).indices, planted_spikes(spec));
  }
}

TEST(Synth, ScalarKeys) {
  SynthSpec spec;
  spec.grid = Grid{4, 4};
  spec.d_k = 1;
  spec.n_spikes = 2;
  const auto t = synth_generate(spec);
  EXPECT_EQ(select_outliers(class_attention(t), 1).indices, planted_spikes(spec));
}

TEST(Synth, PlantedClustersShareEmbeddings) {
  SynthSpec spec;
  spec.cluster_count = 2;
  const auto t = synth_generate(spec);
  // Rows of one band sit within noise of each other, far from the other band.
  const auto a = t.row(0);
  const auto b = t.row(1);
  const auto c = t.row(575);
  double near = 0.0, far = 0.0;
  for (std::size_t i = 0; i < t.d(); ++i) {
    near += (a[i] - b[i]) * (a[i] - b[i]);
    far += (a[i] - c[i]) * (a[i] - c[i]);
  }
  EXPECT_LT(near, 0.1 * far);
  EXPECT_EQ(planted_cluster(spec, 287), 0u);
  EXPECT_EQ(planted_cluster(spec, 288), 1u);
}

TEST(Synth, SpikePositionsSpreadEvenly) {
  SynthSpec spec;
  spec.n_spikes = 4;
  spec.grid = Grid{2, 4};
  EXPECT_EQ(planted_spikes(spec), (std::vector<std::size_t>{1, 3, 5, 7}));
  spec.n_spikes = 8;
  const auto all = planted_spikes(spec);
  std::vector<std::size_t> expected(8);
  std::iota(expected.begin(), expected.end(), std::size_t{0});
  EXPECT_EQ(all, expected);
}

TEST(Synth, Validation) {
  SynthSpec spec;
  spec.n_spikes = 577;
  EXPECT_THROW(synth_generate(spec), Error);
  spec = {};
  spec.cluster_count = 0;
  EXPECT_THROW(synth_generate(spec), Error);
  spec = {};
  spec.d = 0;
  EXPECT_THROW(synth_generate(spec), Error);
}

TEST(Synth, CorpusHasMeanThirtyTwo) {
  const auto counts = corpus_spike_counts();
  EXPECT_EQ(std::accumulate(counts.begin(), counts.end(), std::size_t{0}),
            32 * counts.size());
  const auto specs = corpus_specs(10);
  ASSERT_EQ(specs.size(), counts.size());
  EXPECT_EQ(specs[3].seed, 13u);
}

}  // namespace
}  // namespace prumerge
