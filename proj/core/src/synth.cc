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

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "prumerge/error.h"

namespace prumerge {

namespace {

// Half-width of the uniform background jitter on the scaled logits. A
// bounded jitter keeps every background value inside the upper fence.
constexpr double kBackgroundJitter = 0.1;
// Norm of the per-cluster key direction.
constexpr double kClusterScale = 8.0;
constexpr double kKeyNoise = 0.05;
constexpr double kRowNoise = 0.05;

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  // [0, 1) from the top 53 bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Box-Muller, cosine branch only: two uniforms per normal.
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  std::vector<double> normal_vector(std::size_t dim) {
    std::vector<double> v(dim);
    for (double& x : v) x = normal();
    return v;
  }

 private:
  std::mt19937_64 engine_;
};

double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Removes the component along unit vector u.
void project_out(std::vector<double>& v, const std::vector<double>& u) {
  double along = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) along += v[i] * u[i];
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= along * u[i];
}

}  // namespace

void validate_synth_spec(const SynthSpec& spec) {
  if (spec.grid.h == 0 || spec.grid.w == 0 || spec.d == 0 || spec.d_k == 0 ||
      spec.n_heads == 0) {
    throw_invalid("synth dimensions must be >= 1");
  }
  if (spec.n_spikes > spec.grid.size()) {
    throw_invalid("n_spikes exceeds token count");
  }
  if (spec.cluster_count < 1) throw_invalid("cluster_count must be >= 1");
  if (!std::isfinite(spec.spike_gain)) throw_invalid("spike_gain must be finite");
}

std::vector<std::size_t> planted_spikes(const SynthSpec& spec) {
  const std::size_t n = spec.grid.size();
  std::vector<std::size_t> spikes(spec.n_spikes);
  for (std::size_t s = 0; s < spec.n_spikes; ++s) {
    spikes[s] = ((2 * s + 1) * n) / (2 * spec.n_spikes);
  }
  return spikes;
}

std::size_t planted_cluster(const SynthSpec& spec, std::size_t token) {
  return token * spec.cluster_count / spec.grid.size();
}

// Draw order (all from one std::mt19937_64 stream):
//   1. per head: d_k normals -> unit query direction u_h
//   2. per cluster, per head: d_k normals -> key direction orthogonal to u_h
//   3. per cluster: d normals -> embedding mean
//   4. per token (raster order): one uniform -> background jitter; spikes
//      still consume their uniform
//   5. per head, per token: d_k normals -> key noise orthogonal to u_h
//   6. per token: d normals -> embedding noise
TokenSet synth_generate(const SynthSpec& spec) {
  validate_synth_spec(spec);
  const std::size_t n = spec.grid.size();
  const std::size_t d_k = spec.d_k;
  Sampler rng(spec.seed);

  std::vector<std::vector<double>> query_dir(spec.n_heads);
  for (auto& u : query_dir) {
    u = rng.normal_vector(d_k);
    const double len = norm(u);
    for (double& x : u) x /= len;
  }

  std::vector<std::vector<std::vector<double>>> cluster_dir(
      spec.cluster_count, std::vector<std::vector<double>>(spec.n_heads));
  for (auto& per_head : cluster_dir) {
    for (std::size_t h = 0; h < spec.n_heads; ++h) {
      auto v = rng.normal_vector(d_k);
      project_out(v, query_dir[h]);
      const double len = norm(v);
      for (double& x : v) x = len > 1e-12 ? kClusterScale * x / len : 0.0;
      per_head[h] = std::move(v);
    }
  }

  std::vector<std::vector<double>> cluster_mean(spec.cluster_count);
  for (auto& mu : cluster_mean) mu = rng.normal_vector(spec.d);

  std::vector<double> logit(n);
  std::vector<bool> is_spike(n, false);
  for (std::size_t s : planted_spikes(spec)) is_spike[s] = true;
  for (std::size_t i = 0; i < n; ++i) {
    const double jitter = (2.0 * rng.uniform() - 1.0) * kBackgroundJitter;
    logit[i] = is_spike[i] ? spec.spike_gain : jitter;
  }

  const double q_scale = std::sqrt(static_cast<double>(d_k));
  std::vector<float> q_cls(spec.n_heads * d_k);
  std::vector<float> keys(spec.n_heads * n * d_k);
  for (std::size_t h = 0; h < spec.n_heads; ++h) {
    const auto& u = query_dir[h];
    for (std::size_t c = 0; c < d_k; ++c) {
      q_cls[h * d_k + c] = static_cast<float>(q_scale * u[c]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      auto noise = rng.normal_vector(d_k);
      project_out(noise, u);
      const auto& v = cluster_dir[planted_cluster(spec, i)][h];
      float* key = keys.data() + (h * n + i) * d_k;
      for (std::size_t c = 0; c < d_k; ++c) {
        key[c] = static_cast<float>(logit[i] * u[c] + v[c] +
                                    kKeyNoise * noise[c]);
      }
    }
  }

  std::vector<float> y(n * spec.d);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& mu = cluster_mean[planted_cluster(spec, i)];
    for (std::size_t c = 0; c < spec.d; ++c) {
      y[i * spec.d + c] = static_cast<float>(mu[c] + kRowNoise * rng.normal());
    }
  }
  return TokenSet(spec.grid, spec.d, d_k, spec.n_heads, std::move(q_cls),
                  std::move(keys), std::move(y));
}

std::vector<std::size_t> corpus_spike_counts() {
  return {16, 24, 32, 35, 40, 40, 37};
}

std::vector<SynthSpec> corpus_specs(std::uint64_t base_seed) {
  std::vector<SynthSpec> specs;
  const auto counts = corpus_spike_counts();
  for (std::size_t i = 0; i < counts.size(); ++i) {
    SynthSpec spec;
    spec.n_spikes = counts[i];
    spec.seed = base_seed + i;
    specs.push_back(spec);
  }
  return specs;
}

}  // namespace prumerge
