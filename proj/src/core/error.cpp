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

#include "core/error.hpp"

namespace wconv {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kFamilyMismatch: return "family_mismatch";
    case ErrorCode::kRadiusExceeded: return "radius_exceeded";
    case ErrorCode::kSizeCap: return "size_cap";
    case ErrorCode::kNotInvertible: return "not_certified_invertible";
    case ErrorCode::kNotConverged: return "not_converged";
    case ErrorCode::kNoFeasibleTheta: return "no_feasible_theta";
    case ErrorCode::kSumInconclusive: return "sum_inconclusive";
    case ErrorCode::kParse: return "parse_error";
    case ErrorCode::kIo: return "io_error";
    case ErrorCode::kInternal: return "internal_error";
  }
  return "unknown";
}

}  // namespace wconv
