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

#ifndef WCONV_CORE_CONFIG_HPP
#define WCONV_CORE_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/algebra.hpp"
#include "core/groups.hpp"
#include "core/weights.hpp"
#include "json.hpp"

namespace wconv {

GroupModel parse_group(const nlohmann::json& j);
Weight parse_weight(const GroupModel& g, const nlohmann::json& j);

GroupElement parse_element(const GroupModel& g, const nlohmann::json& x);
nlohmann::json element_json(const GroupElement& x);

// Terms as [{"x": ..., "re": ..., "im": ...}, ...].
AlgebraElement parse_terms(const GroupModel& g, const nlohmann::json& terms);
nlohmann::json terms_json(const AlgebraElement& f);
AlgebraElement read_jsonl(const GroupModel& g, const std::string& path);
std::string to_jsonl(const AlgebraElement& f);

struct NamedElement {
  std::string name;
  AlgebraElement element;
};

struct Precision {
  double trunc = 1e-16;
  double tol = 1e-13;
  int n_max = 20000;
  int k_max = 10;
  int k_cut = 64;
  int sum_n_max = 1000;
  std::int64_t growth_n_max = 1 << 20;
  double margin = 0.05;
  std::size_t support_cap = 1'000'000;
};

struct Checks {
  int axiom_radius = 4;
  int axiom_samples = 1000;
  int pair_radius = 3;
  int diff_norm_trials = 200;
  int diff_norm_radius = 3;
  int probe_n_max = 4096;
};

struct RunConfig {
  std::optional<std::string> preset;  // i, ii, iii, iv
  nlohmann::json group_spec;
  std::vector<nlohmann::json> weight_specs;  // first one is "the" weight
  bool weights_given = false;
  double p = 1.0;
  std::optional<double> s, r;
  std::uint64_t seed = 1;
  Precision precision;
  Checks checks;
  int growth_n_max_radius = 12;  // growth subcommand
  nlohmann::json element_specs = nlohmann::json::array();
  std::string base_dir;
  std::vector<std::string> notes;

  GroupModel group() const;
  Weight weight(const GroupModel& g, std::size_t i = 0) const;
  std::vector<NamedElement> elements(const GroupModel& g) const;
  nlohmann::json echo() const;
};

RunConfig parse_config(const nlohmann::json& j);

}  // namespace wconv

#endif  // WCONV_CORE_CONFIG_HPP
