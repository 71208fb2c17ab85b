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

#ifndef PRUMERGE_ERROR_H_
#define PRUMERGE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace prumerge {

// Error classes. Everything the library throws is a prumerge::Error.
enum class ErrorCode {
  kInvalidArgument,     // contract violation on a call's inputs
  kBadMagic,            // token dump does not start with "PRMG"
  kUnsupportedVersion,  // token dump version field != 1
  kTruncated,           // header or payload shorter than the header implies
  kGridMismatch,        // h * w != n
  kBadDimension,        // a dimension is zero or implausibly large
  kNonFinite,           // NaN/Inf in a tensor
  kTrailingBytes,       // bytes left after the payload
  kIo,                  // filesystem failure
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void throw_invalid(const std::string& message) {
  throw Error(ErrorCode::kInvalidArgument, message);
}

}  // namespace prumerge

#endif  // PRUMERGE_ERROR_H_
