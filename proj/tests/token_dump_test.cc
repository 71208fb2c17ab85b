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

#include "prumerge/token_dump.h"

#include <gtest/gtest.h>

#include <cstdio>
#include <cstring>
#include <random>

#include "oracles.h"
#include "prumerge/error.h"

namespace prumerge {
namespace {

TokenSet minimal() {
  return TokenSet(Grid{1, 1}, 1, 1, 1, {0.5f}, {-1.25f}, {3.0f});
}

ErrorCode decode_error(const std::vector<std::byte>& bytes) {
  try {
    decode_token_dump(bytes);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "decode accepted corrupted bytes";
  return ErrorCode::kInvalidArgument;
}

void set_u32(std::vector<std::byte>& bytes, std::size_t offset,
             std::uint32_t v) {
  for (int b = 0; b < 4; ++b) {
    bytes[offset + b] = static_cast<std::byte>((v >> (8 * b)) & 0xff);
  }
}

TEST(TokenDump, MinimalFileLayout) {
  const auto bytes = encode_token_dump(minimal());
  ASSERT_EQ(bytes.size(), 44u);
  EXPECT_EQ(std::memcmp(bytes.data(), "PRMG", 4), 0);
  const unsigned char expected_header[] = {
      'P', 'R', 'M', 'G', 1, 0, 0, 0,  // magic, version
      1,   0,   0,   0,   1, 0, 0, 0,  // n, d
      1,   0,   0,   0,   1, 0, 0, 0,  // d_k, n_heads
      1,   0,   0,   0,   1, 0, 0, 0,  // h, w
  };
  EXPECT_EQ(std::memcmp(bytes.data(), expected_header, 32), 0);
  // 0.5f = 0x3f000000 little-endian
  EXPECT_EQ(bytes[32], std::byte{0x00});
  EXPECT_EQ(bytes[35], std::byte{0x3f});
}

TEST(TokenDump, FileRoundTrip) {
  const std::string path = ::testing::TempDir() + "minimal.prmg";
  EXPECT_EQ(write_token_dump(minimal(), path), 44u);
  const auto back = read_token_dump(path);
  EXPECT_EQ(back, minimal());
  EXPECT_EQ(back.n(), 1u);
  std::remove(path.c_str());
}

TEST(TokenDump, RoundTripIsBitExact) {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 50; ++trial) {
    const Grid grid{1 + rng() % 6, 1 + rng() % 6};
    const auto t = testing::random_token_set(rng, grid, 1 + rng() % 32,
                                             1 + rng() % 32, 1 + rng() % 4);
    const auto bytes = encode_token_dump(t);
    EXPECT_EQ(bytes.size(),
              32 + 4 * (t.q_cls().size() + t.keys().size() + t.y().size()));
    EXPECT_EQ(decode_token_dump(bytes), t);
    EXPECT_EQ(encode_token_dump(decode_token_dump(bytes)), bytes);
  }
}

TEST(TokenDump, Rejections) {
  const auto good = encode_token_dump(minimal());

  auto bytes = good;
  bytes[0] = std::byte{'X'};
  EXPECT_EQ(decode_error(bytes), ErrorCode::kBadMagic);

  bytes = good;
  set_u32(bytes, 4, 2);
  try {
    decode_token_dump(bytes);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnsupportedVersion);
    EXPECT_NE(std::string(e.what()).find("unsupported version"), std::string::npos);
  }

  bytes = good;
  bytes.pop_back();
  try {
    decode_token_dump(bytes);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTruncated);
    EXPECT_STREQ(e.what(), "truncated payload");
  }

  bytes = good;
  set_u32(bytes, 24, 2);  // h = 2 with n = 1
  try {
    decode_token_dump(bytes);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kGridMismatch);
    EXPECT_NE(std::string(e.what()).find("grid mismatch"), std::string::npos);
  }

  bytes = good;
  set_u32(bytes, 12, 0);  // d = 0
  EXPECT_EQ(decode_error(bytes), ErrorCode::kBadDimension);

  bytes = good;
  bytes.push_back(std::byte{0});
  EXPECT_EQ(decode_error(bytes), ErrorCode::kTrailingBytes);

  bytes = good;
  set_u32(bytes, 40, 0x7fc00000);  // NaN in Y
  EXPECT_EQ(decode_error(bytes), ErrorCode::kNonFinite);

  bytes.assign(good.begin(), good.begin() + 20);
  EXPECT_EQ(decode_error(bytes), ErrorCode::kTruncated);
}

TEST(TokenDump, HugeDimensionsDoNotAllocate) {
  auto bytes = encode_token_dump(minimal());
  const std::uint32_t big = 1u << 24;
  set_u32(bytes, 8, big);    // n
  set_u32(bytes, 24, big);   // h
  set_u32(bytes, 16, big);   // d_k
  set_u32(bytes, 20, big);   // n_heads
  EXPECT_EQ(decode_error(bytes), ErrorCode::kTruncated);
}

TEST(TokenDump, MissingFileIsIoError) {
  try {
    read_token_dump(::testing::TempDir() + "does_not_exist.prmg");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
}

}  // namespace
}  // namespace prumerge
