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

#ifndef WCONV_CORE_COMMANDS_HPP
#define WCONV_CORE_COMMANDS_HPP

#include <string>
#include <vector>

#include "core/config.hpp"
#include "json.hpp"

namespace wconv {

inline constexpr const char* kReportSchema = "wconv-report/1";

// Process exit codes shared by the CLI and the C API.
enum Outcome : int {
  kOutcomeVerified = 0,
  kOutcomeError = 1,
  kOutcomeRefuted = 2,
  kOutcomeInconclusive = 3,
};

struct CommandResult {
  nlohmann::json report;
  int outcome = kOutcomeVerified;
  std::string csv;    // bound-compare and growth only
  std::string table;  // human-readable summary
};

const std::vector<std::string>& command_names();

// Operational failures (bad config, I/O) surface as wconv::Error.
CommandResult run_command(const std::string& name, const RunConfig& cfg);

}  // namespace wconv

#endif  // WCONV_CORE_COMMANDS_HPP
