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

#ifndef PRUMERGE_RENDER_H_
#define PRUMERGE_RENDER_H_

#include <string>

#include "prumerge/selection.h"
#include "prumerge/token_core.h"

namespace prumerge {

enum class MaskFormat {
  kText,  // h lines of w chars, '#' selected, '.' not
  kPgm,   // binary P5, 255 selected, 0 not
};

// Renders the selection as a grid mask. Text lines are joined by '\n'
// without a trailing newline.
std::string render_mask(const SelectionResult& selection, Grid grid,
                        MaskFormat format);

}  // namespace prumerge

#endif  // PRUMERGE_RENDER_H_
