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

#ifndef WCONV_CORE_RADIAL_SUM_HPP
#define WCONV_CORE_RADIAL_SUM_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "core/groups.hpp"
#include "core/report.hpp"
#include "json.hpp"

namespace wconv {

// Sum over G of a radial term t(tau(x)), grouped by spheres:
// S_n = |sphere(n)| t(n), partial sum up to n_max plus a certified tail.
struct RadialSum {
  Status status = Status::kInconclusive;
  std::string certificate = "none";  // geometric | power_law | none
  int n_max = 0;
  int window_from = 0;
  double rate = 0.0;  // max shell ratio, or the decay exponent
  double log_partial = 0.0;
  double log_tail = 0.0;
  double log_total = 0.0;
  bool majorant_used = false;
  int exact_through = 0;
  std::vector<double> log_shell_terms;

  double total() const;
  nlohmann::json to_json() const;
};

RadialSum radial_sum(const GroupModel& g,
                     const std::function<double(std::int64_t)>& log_term,
                     int n_max, double margin);

}  // namespace wconv

#endif  // WCONV_CORE_RADIAL_SUM_HPP
