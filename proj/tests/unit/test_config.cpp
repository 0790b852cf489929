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

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "core/config.hpp"
#include "core/error.hpp"
#include "doctest.h"

using namespace wconv;
using nlohmann::json;

namespace {

ErrorCode code_of(const json& j) {
  try {
    parse_config(j);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
  const auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << body;
  return p;
}

}  // namespace

TEST_CASE("presets") {
  const RunConfig i = parse_config({{"case", "i"}});
  CHECK(i.group().family() == Family::kLocallyFinite);
  CHECK(*i.s == 4.0);
  CHECK(*i.r == 2.5);
  const RunConfig ii = parse_config({{"case", "ii"}});
  CHECK(ii.group().dimension() == 2);
  CHECK(ii.weight(ii.group()).describe()["family"] == "polynomial");
  CHECK(ii.weight(ii.group()).describe()["beta"] == 3.0);
  const RunConfig iv = parse_config({{"case", "iv"}});
  CHECK(iv.group().family() == Family::kHeisenberg);
  CHECK(iv.notes.size() == 1);
  // explicit fields override the preset
  const RunConfig o = parse_config({{"case", "iii"}, {"s", 4.5}});
  CHECK(*o.s == 4.5);
  CHECK(code_of({{"case", "v"}}) == ErrorCode::kParse);
}

TEST_CASE("defaults") {
  const RunConfig c = parse_config({{"group", {{"family", "lattice"}, {"dim", 1}}}});
  const GroupModel g = c.group();
  CHECK(c.weight(g)(GroupElement::lattice({7})) == 1.0);
  CHECK(c.p == 1.0);
  CHECK(c.seed == 1);
  CHECK(!c.s.has_value());
  const auto els = c.elements(g);
  REQUIRE(els.size() == 2);
  CHECK(els[0].name == "geometric");
  CHECK(els[0].element.coefficient(GroupElement::lattice({1})) == Complex(-0.5));
  CHECK(code_of({{"group", {{"family", "locally_finite"}}}}) == ErrorCode::kParse);
}

TEST_CASE("malformed configs are parse errors") {
  CHECK(code_of(json::array()) == ErrorCode::kParse);
  CHECK(code_of(json::object()) == ErrorCode::kParse);
  CHECK(code_of({{"group", {{"family", "free"}}}}) == ErrorCode::kParse);
  CHECK(code_of({{"group", {{"family", "lattice"}}}, {"weight", {{"family", "bogus"}}}}) ==
        ErrorCode::kParse);
  CHECK(code_of({{"group", {{"family", "lattice"}}}, {"weight", {{"family", "polynomial"}}}}) ==
        ErrorCode::kParse);
  CHECK(code_of({{"group", {{"family", "lattice"}}}, {"p", "two"}}) == ErrorCode::kParse);
  CHECK(code_of({{"group", {{"family", "lattice"}, {"dim", 2}}},
                 {"elements", {{{"terms", {{{"x", {1}}, {"re", 1.0}}}}}}}}) ==
        ErrorCode::kInvalidArgument);
  CHECK(code_of({{"group", {{"family", "lattice"}}}, {"p", 0.5}}) ==
        ErrorCode::kInvalidArgument);
  CHECK(code_of({{"group", {{"family", "lattice"}}},
                 {"elements", {{{"file", "/nonexistent/x.jsonl"}}}}}) == ErrorCode::kIo);
}

TEST_CASE("element round trip through JSON lines") {
  const GroupModel h = GroupModel::heisenberg();
  const AlgebraElement f = AlgebraElement::from_terms(
      h, {{GroupElement::heisenberg(1, -2, 3), Complex(0.25, -1.5)},
          {GroupElement::heisenberg(0, 0, 0), Complex(1.0, 0.0)}});
  const auto p = temp_file("wconv_roundtrip.jsonl", to_jsonl(f) + "\n");
  const AlgebraElement g = read_jsonl(h, p.string());
  CHECK((f - g).empty());
  const auto lf = GroupModel::locally_finite(10);
  const GroupElement x = GroupElement::subset({2, 5});
  CHECK(parse_element(lf, element_json(x)) == x);
  std::filesystem::remove(p);
}

TEST_CASE("bad JSON lines and relative files") {
  const auto bad = temp_file("wconv_bad.jsonl", "{\"x\": [1], \"re\": 1}\nnot json\n");
  try {
    read_jsonl(GroupModel::lattice(1), bad.string());
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kParse);
  }
  const auto good = temp_file("wconv_rel.jsonl", "{\"x\": [2], \"re\": 0.5}\n");
  const RunConfig c = parse_config({{"group", {{"family", "lattice"}}},
                                    {"base_dir", good.parent_path().string()},
                                    {"elements", {{{"name", "f"}, {"file", "wconv_rel.jsonl"}}}}});
  const auto els = c.elements(c.group());
  REQUIRE(els.size() == 1);
  CHECK(els[0].element.coefficient(GroupElement::lattice({2})) == Complex(0.5));
  std::filesystem::remove(bad);
  std::filesystem::remove(good);
}

TEST_CASE("echo carries the effective settings") {
  const RunConfig c = parse_config({{"group", {{"family", "lattice"}}},
                                    {"precision", {{"tol", 1e-9}}},
                                    {"seed", 42},
                                    {"s", 3.0}});
  const json e = c.echo();
  CHECK(e["precision"]["tol"] == 1e-9);
  CHECK(e["precision"]["k_max"] == 10);
  CHECK(e["seed"] == 42);
  CHECK(e["s"] == 3.0);
  CHECK(!e.contains("r"));
}
