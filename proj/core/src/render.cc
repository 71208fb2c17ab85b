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

#include "prumerge/render.h"

#include <vector>

#include "prumerge/error.h"

namespace prumerge {

std::string render_mask(const SelectionResult& selection, Grid grid,
                        MaskFormat format) {
  const std::size_t n = grid.size();
  if (n == 0) throw_invalid("empty grid");
  std::vector<bool> on(n, false);
  for (std::size_t i : selection.indices) {
    if (i >= n) throw_invalid("selected index outside the grid");
    on[i] = true;
  }

  std::string out;
  if (format == MaskFormat::kText) {
    out.reserve(n + grid.h);
    for (std::size_t r = 0; r < grid.h; ++r) {
      if (r > 0) out.push_back('\n');
      for (std::size_t c = 0; c < grid.w; ++c) {
        out.push_back(on[r * grid.w + c] ? '#' : '.');
      }
    }
    return out;
  }
  out = "P5\n" + std::to_string(grid.w) + " " + std::to_string(grid.h) +
        "\n255\n";
  for (bool b : on) out.push_back(static_cast<char>(b ? 255 : 0));
  return out;
}

}  // namespace prumerge
