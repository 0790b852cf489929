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

#include <cmath>
#include <numbers>

#include "core/radial_sum.hpp"
#include "doctest.h"

using namespace wconv;

TEST_CASE("radial sum: geometric shells on Z") {
  const RadialSum s = radial_sum(GroupModel::lattice(1),
                                 [](std::int64_t n) { return -double(n); }, 200, 0.05);
  REQUIRE(s.status == Status::kVerified);
  CHECK(s.certificate == "geometric");
  const double exact = 1.0 + 2.0 / (std::numbers::e - 1.0);
  CHECK(s.total() >= exact - 1e-12);
  CHECK(s.total() == doctest::Approx(exact).epsilon(1e-9));
}

TEST_CASE("radial sum: power-law shells on Z") {
  const RadialSum s = radial_sum(
      GroupModel::lattice(1), [](std::int64_t n) { return -2.0 * std::log1p(double(n)); }, 1000,
      0.05);
  REQUIRE(s.status == Status::kVerified);
  CHECK(s.certificate == "power_law");
  const double exact = std::numbers::pi * std::numbers::pi / 3.0 - 1.0;
  CHECK(s.total() >= exact);
  CHECK(s.total() <= exact + 0.01);
}

TEST_CASE("radial sum: locally finite chain") {
  // shells 2^(n-1), terms 4^-n: total 1 + 1/2
  const RadialSum s = radial_sum(GroupModel::locally_finite(40),
                                 [](std::int64_t n) { return -double(n) * std::log(4.0); },
                                 40, 0.05);
  REQUIRE(s.status == Status::kVerified);
  CHECK(s.total() == doctest::Approx(1.5).epsilon(1e-9));
}

TEST_CASE("radial sum: divergence is refuted") {
  const RadialSum flat =
      radial_sum(GroupModel::lattice(1), [](std::int64_t) { return 0.0; }, 500, 0.05);
  CHECK(flat.status == Status::kRefuted);
  // 2 / (1+n) shells: harmonic
  const RadialSum harm = radial_sum(
      GroupModel::lattice(1), [](std::int64_t n) { return -std::log1p(double(n)); }, 1000, 0.05);
  CHECK(harm.status != Status::kVerified);
}

TEST_CASE("radial sum: Heisenberg beyond the enumeration cap uses the majorant") {
  const GroupModel h = GroupModel::heisenberg(GroupCaps{8, 5'000'000});
  const RadialSum s = radial_sum(h, [](std::int64_t n) { return -double(n); }, 60, 0.05);
  CHECK(s.status == Status::kVerified);
  CHECK(s.majorant_used);
  CHECK(s.exact_through == 8);
  double exact_part = 0.0;
  const auto sp = h.sphere_sizes(8);
  for (int n = 0; n <= 8; ++n) exact_part += double(sp[n]) * std::exp(-double(n));
  CHECK(s.total() >= exact_part);
  const nlohmann::json j = s.to_json();
  CHECK(j["certificate"] == "geometric");
}
