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

#ifndef PRUMERGE_SELECTION_H_
#define PRUMERGE_SELECTION_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "prumerge/token_core.h"

namespace prumerge {

struct Quartiles {
  double q1 = 0.0;
  double q3 = 0.0;
};

// Tukey fences around the interquartile range.
struct Fences {
  double q1 = 0.0;
  double q3 = 0.0;
  double iqr = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

enum class SelectionMethod {
  kIqr,
  kIqrPlusUniform,
  kSequential,
  kSpatial,
  kFloorFallback,
};

std::string_view method_name(SelectionMethod method);

enum class FenceSides {
  kUpper,  // a > upper
  kBoth,   // a > upper or a < lower
};

struct SelectionResult {
  std::vector<std::size_t> indices;  // strictly ascending
  std::optional<Fences> fences;      // absent for the baselines
  SelectionMethod method = SelectionMethod::kIqr;

  std::size_t m() const { return indices.size(); }
};

// Sample quartiles with linear interpolation between closest ranks at
// positions 0.25 (n - 1) and 0.75 (n - 1) of the sorted values.
Quartiles quartiles(std::span<const double> values);

Fences iqr_fences(std::span<const double> values);

// Adaptive selection: indices whose attention lies strictly beyond the
// fences. When fewer than `floor` indices qualify, the `floor` largest
// attention values are taken instead (ties to the lower index).
SelectionResult select_outliers(const AttentionVector& attention,
                                std::size_t floor = 1,
                                FenceSides sides = FenceSides::kUpper);

// Adds round(ratio * n) grid-centered sample points to `base`. `base` may
// be empty.
SelectionResult uniform_spatial_supplement(const SelectionResult& base,
                                           Grid grid, double ratio);

// The first `budget` tokens in raster order.
SelectionResult sequential_baseline(std::size_t n, std::size_t budget);

// rows x cols tokens at the centers of an even partition of the grid.
SelectionResult spatial_grid_baseline(Grid grid, std::size_t rows,
                                      std::size_t cols);

// Checks the SelectionResult invariants against a token count; throws
// kInvalidArgument on violation.
void validate_selection(const SelectionResult& selection, std::size_t n);

}  // namespace prumerge

#endif  // PRUMERGE_SELECTION_H_
