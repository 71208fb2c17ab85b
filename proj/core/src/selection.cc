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

#include "prumerge/selection.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "prumerge/error.h"

namespace prumerge {

namespace {

// Value at fractional rank `pos` of `values`, which nth_element partially
// reorders.
double interpolated_rank(std::vector<double>& values, double pos) {
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(lo);
  std::nth_element(values.begin(), values.begin() + lo, values.end());
  const double lower = values[lo];
  if (frac == 0.0 || lo + 1 >= values.size()) return lower;
  // Everything right of lo is >= lower; the next order statistic is its min.
  const double upper = *std::min_element(values.begin() + lo + 1, values.end());
  return lower + frac * (upper - lower);
}

void check_finite(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) throw_invalid("non-finite attention value");
  }
}

std::size_t center_offset(std::size_t i, std::size_t extent,
                          std::size_t samples) {
  // floor((i + 0.5) * extent / samples) in integer arithmetic.
  return ((2 * i + 1) * extent) / (2 * samples);
}

std::vector<std::size_t> grid_points(Grid grid, std::size_t rows,
                                     std::size_t cols) {
  std::vector<std::size_t> out;
  out.reserve(rows * cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::size_t r = center_offset(i, grid.h, rows);
    for (std::size_t j = 0; j < cols; ++j) {
      out.push_back(r * grid.w + center_offset(j, grid.w, cols));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

std::string_view method_name(SelectionMethod method) {
  switch (method) {
    case SelectionMethod::kIqr: return "iqr";
    case SelectionMethod::kIqrPlusUniform: return "iqr_plus_uniform";
    case SelectionMethod::kSequential: return "sequential";
    case SelectionMethod::kSpatial: return "spatial";
    case SelectionMethod::kFloorFallback: return "floor_fallback";
  }
  return "unknown";
}

Quartiles quartiles(std::span<const double> values) {
  if (values.empty()) throw_invalid("quartiles of an empty sample");
  check_finite(values);
  std::vector<double> work(values.begin(), values.end());
  const double last = static_cast<double>(work.size() - 1);
  Quartiles q;
  q.q1 = interpolated_rank(work, 0.25 * last);
  q.q3 = interpolated_rank(work, 0.75 * last);
  return q;
}

Fences iqr_fences(std::span<const double> values) {
  const Quartiles q = quartiles(values);
  Fences f;
  f.q1 = q.q1;
  f.q3 = q.q3;
  f.iqr = q.q3 - q.q1;
  f.lower = q.q1 - 1.5 * f.iqr;
  f.upper = q.q3 + 1.5 * f.iqr;
  return f;
}

SelectionResult select_outliers(const AttentionVector& attention,
                                std::size_t floor, FenceSides sides) {
  const std::size_t n = attention.size();
  if (n == 0) throw_invalid("empty attention vector");
  if (floor < 1 || floor > n) {
    throw_invalid("floor must be in [1, n], got " + std::to_string(floor));
  }

  SelectionResult result;
  result.fences = iqr_fences(attention.a);
  const Fences& f = *result.fences;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = attention[i];
    if (v > f.upper || (sides == FenceSides::kBoth && v < f.lower)) {
      result.indices.push_back(i);
    }
  }
  result.method = SelectionMethod::kIqr;
  if (result.indices.size() >= floor) return result;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::partial_sort(order.begin(), order.begin() + floor, order.end(),
                    [&](std::size_t x, std::size_t y) {
                      if (attention[x] != attention[y]) {
                        return attention[x] > attention[y];
                      }
                      return x < y;
                    });
  order.resize(floor);
  std::sort(order.begin(), order.end());
  result.indices = std::move(order);
  result.method = SelectionMethod::kFloorFallback;
  return result;
}

SelectionResult uniform_spatial_supplement(const SelectionResult& base,
                                           Grid grid, double ratio) {
  if (!(ratio > 0.0) || ratio > 1.0) {
    throw_invalid("supplement ratio must be in (0, 1]");
  }
  const std::size_t n = grid.size();
  if (n == 0) throw_invalid("empty grid");
  for (std::size_t i : base.indices) {
    if (i >= n) throw_invalid("base index outside the grid");
  }

  const double target = std::round(ratio * static_cast<double>(n));
  const double aspect = static_cast<double>(grid.h) / grid.w;
  auto rows = static_cast<std::size_t>(
      std::clamp(std::round(std::sqrt(target * aspect)), 1.0,
                 static_cast<double>(grid.h)));
  auto cols = static_cast<std::size_t>(
      std::clamp(std::ceil(target / static_cast<double>(rows)), 1.0,
                 static_cast<double>(grid.w)));

  const auto points = grid_points(grid, rows, cols);
  SelectionResult result;
  result.fences = base.fences;
  result.method = SelectionMethod::kIqrPlusUniform;
  std::set_union(base.indices.begin(), base.indices.end(), points.begin(),
                 points.end(), std::back_inserter(result.indices));
  result.indices.erase(
      std::unique(result.indices.begin(), result.indices.end()),
      result.indices.end());
  return result;
}

SelectionResult sequential_baseline(std::size_t n, std::size_t budget) {
  if (budget > n) throw_invalid("budget exceeds token count");
  if (budget < 1) throw_invalid("budget must be >= 1");
  SelectionResult result;
  result.indices.resize(budget);
  std::iota(result.indices.begin(), result.indices.end(), std::size_t{0});
  result.method = SelectionMethod::kSequential;
  return result;
}

SelectionResult spatial_grid_baseline(Grid grid, std::size_t rows,
                                      std::size_t cols) {
  if (rows < 1 || cols < 1) throw_invalid("spatial grid must be at least 1x1");
  if (rows > grid.h || cols > grid.w) {
    throw_invalid("spatial grid " + std::to_string(rows) + "x" +
                  std::to_string(cols) + " exceeds token grid " +
                  std::to_string(grid.h) + "x" + std::to_string(grid.w));
  }
  SelectionResult result;
  result.indices = grid_points(grid, rows, cols);
  result.method = SelectionMethod::kSpatial;
  return result;
}

void validate_selection(const SelectionResult& selection, std::size_t n) {
  const auto& idx = selection.indices;
  if (idx.empty() || idx.size() > n) {
    throw_invalid("selection size must be in [1, n]");
  }
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] >= n) throw_invalid("selected index out of range");
    if (i > 0 && idx[i] <= idx[i - 1]) {
      throw_invalid("selected indices must be strictly ascending");
    }
  }
}

}  // namespace prumerge
