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

#ifndef PRUMERGE_PRUMERGE_H_
#define PRUMERGE_PRUMERGE_H_

#include "prumerge/cost_model.h"
#include "prumerge/error.h"
#include "prumerge/merging.h"
#include "prumerge/pipeline.h"
#include "prumerge/render.h"
#include "prumerge/selection.h"
#include "prumerge/synth.h"
#include "prumerge/token_core.h"
#include "prumerge/token_dump.h"

#endif  // PRUMERGE_PRUMERGE_H_
