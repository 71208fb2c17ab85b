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

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include "prumerge/error.h"

namespace prumerge {

namespace {

constexpr std::array<char, 4> kMagic = {'P', 'R', 'M', 'G'};
// Upper bound on any single dimension accepted from a file.
constexpr std::uint64_t kMaxDim = 1u << 24;

void put_u32(std::vector<std::byte>& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) {
    out.push_back(static_cast<std::byte>((v >> shift) & 0xffu));
  }
}

std::uint32_t get_u32(std::span<const std::byte> in, std::size_t offset) {
  std::uint32_t v = 0;
  for (int b = 0; b < 4; ++b) {
    v |= std::to_integer<std::uint32_t>(in[offset + b]) << (8 * b);
  }
  return v;
}

void put_floats(std::vector<std::byte>& out, std::span<const float> values) {
  for (float f : values) put_u32(out, std::bit_cast<std::uint32_t>(f));
}

std::vector<float> get_floats(std::span<const std::byte> in,
                              std::size_t& offset, std::size_t count,
                              const char* field) {
  std::vector<float> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = std::bit_cast<float>(get_u32(in, offset));
    offset += 4;
    if (!std::isfinite(out[i])) {
      throw Error(ErrorCode::kNonFinite,
                  std::string("non-finite value in ") + field);
    }
  }
  return out;
}

std::uint32_t checked_u32(std::size_t v, const char* field) {
  if (v > std::numeric_limits<std::uint32_t>::max()) {
    throw_invalid(std::string(field) + " does not fit in uint32");
  }
  return static_cast<std::uint32_t>(v);
}

}  // namespace

std::vector<std::byte> encode_token_dump(const TokenSet& tokens) {
  std::vector<std::byte> out;
  out.reserve(kTokenDumpHeaderBytes +
              4 * (tokens.q_cls().size() + tokens.keys().size() +
                   tokens.y().size()));
  for (char c : kMagic) out.push_back(static_cast<std::byte>(c));
  put_u32(out, kTokenDumpVersion);
  put_u32(out, checked_u32(tokens.n(), "n"));
  put_u32(out, checked_u32(tokens.d(), "d"));
  put_u32(out, checked_u32(tokens.d_k(), "d_k"));
  put_u32(out, checked_u32(tokens.n_heads(), "n_heads"));
  put_u32(out, checked_u32(tokens.grid().h, "h"));
  put_u32(out, checked_u32(tokens.grid().w, "w"));
  put_floats(out, tokens.q_cls());
  put_floats(out, tokens.keys());
  put_floats(out, tokens.y());
  return out;
}

TokenSet decode_token_dump(std::span<const std::byte> bytes) {
  if (bytes.size() < kMagic.size() ||
      std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0) {
    throw Error(ErrorCode::kBadMagic, "bad magic: expected \"PRMG\"");
  }
  if (bytes.size() < kTokenDumpHeaderBytes) {
    throw Error(ErrorCode::kTruncated, "truncated header");
  }
  const std::uint32_t version = get_u32(bytes, 4);
  if (version != kTokenDumpVersion) {
    throw Error(ErrorCode::kUnsupportedVersion,
                "unsupported version " + std::to_string(version));
  }

  static constexpr const char* kFields[] = {"n", "d", "d_k", "n_heads", "h", "w"};
  std::array<std::uint64_t, 6> dims{};
  for (std::size_t i = 0; i < dims.size(); ++i) {
    dims[i] = get_u32(bytes, 8 + 4 * i);
    if (dims[i] == 0 || dims[i] > kMaxDim) {
      throw Error(ErrorCode::kBadDimension,
                  std::string("bad dimension: ") + kFields[i] + " = " +
                      std::to_string(dims[i]));
    }
  }
  const auto [n, d, d_k, n_heads, h, w] = dims;
  if (h * w != n) {
    throw Error(ErrorCode::kGridMismatch,
                "grid mismatch: h*w = " + std::to_string(h * w) +
                    " but n = " + std::to_string(n));
  }

  // Each factor is <= 2^24, so the products below fit in 64 bits except
  // n_heads*n*d_k (2^72); guard it against the byte count first.
  const std::uint64_t available = (bytes.size() - kTokenDumpHeaderBytes) / 4;
  const std::uint64_t q_count = n_heads * d_k;
  const std::uint64_t y_count = n * d;
  if (q_count > available || y_count > available ||
      n_heads * d_k > available / n) {
    throw Error(ErrorCode::kTruncated, "truncated payload");
  }
  const std::uint64_t k_count = n_heads * d_k * n;
  const std::uint64_t expected = q_count + k_count + y_count;
  const std::uint64_t payload_bytes = bytes.size() - kTokenDumpHeaderBytes;
  if (payload_bytes < expected * 4) {
    throw Error(ErrorCode::kTruncated, "truncated payload");
  }
  if (payload_bytes > expected * 4) {
    throw Error(ErrorCode::kTrailingBytes,
                "trailing bytes: " + std::to_string(payload_bytes - expected * 4));
  }

  std::size_t offset = kTokenDumpHeaderBytes;
  auto q_cls = get_floats(bytes, offset, q_count, "q_cls");
  auto keys = get_floats(bytes, offset, k_count, "keys");
  auto y = get_floats(bytes, offset, y_count, "y");
  return TokenSet(Grid{h, w}, d, d_k, n_heads, std::move(q_cls),
                  std::move(keys), std::move(y));
}

std::size_t write_token_dump(const TokenSet& tokens, const std::string& path) {
  const auto bytes = encode_token_dump(tokens);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open for writing: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path);
  return bytes.size();
}

TokenSet read_token_dump(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::vector<char> raw((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::kIo, "read failed: " + path);
  return decode_token_dump(std::as_bytes(std::span<const char>(raw)));
}

}  // namespace prumerge
