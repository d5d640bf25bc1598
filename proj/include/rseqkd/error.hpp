// Copyright 2026 The rse-qkd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RSEQKD_ERROR_HPP
#define RSEQKD_ERROR_HPP

#include <stdexcept>
#include <string>

namespace rseqkd {

enum class ErrorCode {
    kInvalidArgument = 1,
    kDomain,
    kParse,
    kDimensionMismatch,
    kNegativeEntry,
    kInsufficientData,
    kTooLarge,
    kDegenerate,
    kIo,
};

/// Exception type thrown by every library routine. `line`/`column` are
/// 1-based source locations for ingestion errors and 0 otherwise.
class Error : public std::runtime_error {
   public:
    Error(ErrorCode code, const std::string &message, int line = 0, int column = 0)
        : std::runtime_error(message), code_(code), line_(line), column_(column) {
    }

    ErrorCode code() const noexcept {
        return code_;
    }
    int line() const noexcept {
        return line_;
    }
    int column() const noexcept {
        return column_;
    }

   private:
    ErrorCode code_;
    int line_;
    int column_;
};

}  // namespace rseqkd

#endif
