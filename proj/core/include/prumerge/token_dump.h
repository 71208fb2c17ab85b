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

#ifndef PRUMERGE_TOKEN_DUMP_H_
#define PRUMERGE_TOKEN_DUMP_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "prumerge/token_core.h"

namespace prumerge {

// PRMG token dump, all fields little-endian:
//
//   offset  size  field
//   0       4     magic "PRMG"
//   4       4     version (uint32) = 1
//   8       24    n, d, d_k, n_heads, h, w (uint32 each)
//   32      ...   q_cls [n_heads x d_k] float32
//                 K     [n_heads x n x d_k] float32
//                 Y     [n x d] float32
//
// No padding, no trailing bytes.
inline constexpr std::uint32_t kTokenDumpVersion = 1;
inline constexpr std::size_t kTokenDumpHeaderBytes = 32;

std::vector<std::byte> encode_token_dump(const TokenSet& tokens);
TokenSet decode_token_dump(std::span<const std::byte> bytes);

// Returns the number of bytes written.
std::size_t write_token_dump(const TokenSet& tokens, const std::string& path);
TokenSet read_token_dump(const std::string& path);

}  // namespace prumerge

#endif  // PRUMERGE_TOKEN_DUMP_H_
