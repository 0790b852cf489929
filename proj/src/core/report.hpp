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

#ifndef WCONV_CORE_REPORT_HPP
#define WCONV_CORE_REPORT_HPP

#include <string>

#include "json.hpp"

namespace wconv {

enum class Status { kVerified, kRefuted, kInconclusive };

inline const char* status_name(Status s) {
  switch (s) {
    case Status::kVerified: return "verified";
    case Status::kRefuted: return "refuted";
    case Status::kInconclusive: return "inconclusive";
  }
  return "unknown";
}

struct ConditionReport {
  std::string condition;
  Status status = Status::kInconclusive;
  nlohmann::json params = nlohmann::json::object();
  nlohmann::json evidence = nlohmann::json::object();

  nlohmann::json to_json() const {
    return {{"condition", condition},
            {"status", status_name(status)},
            {"params", params},
            {"evidence", evidence}};
  }
};

}  // namespace wconv

#endif  // WCONV_CORE_REPORT_HPP
