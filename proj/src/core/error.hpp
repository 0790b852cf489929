// Copyright 2026 The wconv Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WCONV_CORE_ERROR_HPP
#define WCONV_CORE_ERROR_HPP

#include <stdexcept>
#include <string>

#include "json.hpp"

namespace wconv {

enum class ErrorCode {
  kInvalidArgument = 1,
  kFamilyMismatch,
  kRadiusExceeded,
  kSizeCap,
  kNotInvertible,
  kNotConverged,
  kNoFeasibleTheta,
  kSumInconclusive,
  kParse,
  kIo,
  kInternal,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what,
        nlohmann::json diagnostics = nlohmann::json::object())
      : std::runtime_error(what),
        code_(code),
        diagnostics_(std::move(diagnostics)) {}

  ErrorCode code() const noexcept { return code_; }
  const nlohmann::json& diagnostics() const noexcept { return diagnostics_; }

 private:
  ErrorCode code_;
  nlohmann::json diagnostics_;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw Error(ErrorCode::kInvalidArgument, what);
}

}  // namespace wconv

#endif  // WCONV_CORE_ERROR_HPP
