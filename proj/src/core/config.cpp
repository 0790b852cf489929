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

#include "core/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "core/error.hpp"

namespace wconv {

using nlohmann::json;

namespace {

const json& need(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::kParse, std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("field '") + key + "': " + e.what());
  }
}

std::string family_of(const json& j) { return need(j, "family").get<std::string>(); }

json preset_group(const std::string& c) {
  if (c == "i") return {{"family", "locally_finite"}, {"chain_length", 24}};
  if (c == "ii") return {{"family", "lattice"}, {"dim", 2}};
  if (c == "iii") return {{"family", "lattice"}, {"dim", 1}};
  return {{"family", "heisenberg"}};
}

json preset_weight(const std::string& c) {
  if (c == "i") return {{"family", "locally_finite"}, {"base", 4.0}, {"D", 1.0}};
  if (c == "ii") return {{"family", "polynomial"}, {"beta", 3.0}};
  return {{"family", "subexp_power"}, {"alpha", 0.5}, {"C", 1.0}};
}

// (s, r) with p = 1 need r > 2; each pair makes the summability sum converge.
std::pair<double, double> preset_sr(const std::string& c) {
  if (c == "i") return {4.0, 2.5};
  if (c == "ii") return {3.5, 2.5};
  return {5.0, 2.5};
}

json default_elements(const GroupModel& g) {
  json out = json::array();
  switch (g.family()) {
    case Family::kLattice: {
      const int d = g.dimension();
      auto unit = [d](int axis, int sgn) {
        json x = json::array();
        for (int i = 0; i < d; ++i) x.push_back(i == axis ? sgn : 0);
        return x;
      };
      json zero = json::array();
      for (int i = 0; i < d; ++i) zero.push_back(0);
      out.push_back({{"name", "geometric"},
                     {"terms", {{{"x", zero}, {"re", 1.0}},
                                {{"x", unit(0, 1)}, {"re", -0.5}}}}});
      json herm = {{{"x", zero}, {"re", 1.0}},
                   {{"x", unit(0, 1)}, {"re", 0.2}},
                   {{"x", unit(0, -1)}, {"re", 0.2}}};
      if (d >= 2) {
        herm.push_back({{"x", unit(1, 1)}, {"re", 0.1}});
        herm.push_back({{"x", unit(1, -1)}, {"re", 0.1}});
      }
      out.push_back({{"name", "hermitian"}, {"terms", herm}});
      break;
    }
    case Family::kHeisenberg:
      out.push_back({{"name", "generators"},
                     {"terms", {{{"x", {0, 0, 0}}, {"re", 1.0}},
                                {{"x", {1, 0, 0}}, {"re", -0.3}},
                                {{"x", {0, 1, 0}}, {"re", -0.2}}}}});
      break;
    case Family::kLocallyFinite:
      out.push_back({{"name", "generators"},
                     {"terms", {{{"x", json::array()}, {"re", 1.0}},
                                {{"x", {1}}, {"re", -0.4}},
                                {{"x", {2}}, {"re", -0.2}}}}});
      break;
  }
  return out;
}

}  // namespace

GroupModel parse_group(const json& j) {
  const std::string fam = family_of(j);
  GroupCaps caps;
  if (j.contains("caps")) {
    caps.radius = get_or<int>(j["caps"], "radius", caps.radius);
    caps.elements = get_or<std::size_t>(j["caps"], "elements", caps.elements);
    require(caps.radius > 0 && caps.elements > 0, "caps must be positive");
  }
  if (fam == "lattice") return GroupModel::lattice(get_or<int>(j, "dim", 1), caps);
  if (fam == "heisenberg") return GroupModel::heisenberg(caps);
  if (fam == "locally_finite") {
    return GroupModel::locally_finite(get_or<int>(j, "chain_length", 20), caps);
  }
  throw Error(ErrorCode::kParse, "unknown group family '" + fam + "'");
}

Weight parse_weight(const GroupModel& g, const json& j) {
  const std::string fam = family_of(j);
  if (fam == "polynomial") return Weight::polynomial(g, need(j, "beta").get<double>());
  if (fam == "subexp_power") {
    return Weight::subexp_power(g, need(j, "alpha").get<double>(), get_or(j, "C", 1.0));
  }
  if (fam == "subexp_log") {
    return Weight::subexp_log(g, get_or(j, "gamma", 1.0), get_or(j, "C", 1.0));
  }
  if (fam == "locally_finite") {
    const double d = get_or(j, "D", 1.0);
    if (j.contains("n")) {
      return Weight::locally_finite(g, j["n"].get<std::vector<double>>(), d);
    }
    return Weight::locally_finite_geometric(g, get_or(j, "base", 2.0), d);
  }
  if (fam == "custom_profile") {
    return Weight::custom_table(g, need(j, "table").get<std::vector<double>>(),
                                get_or<std::string>(j, "label", "custom_table"));
  }
  throw Error(ErrorCode::kParse, "unknown weight family '" + fam + "'");
}

GroupElement parse_element(const GroupModel& g, const json& x) {
  if (!x.is_array()) throw Error(ErrorCode::kParse, "element must be an array");
  std::vector<std::int64_t> v = x.get<std::vector<std::int64_t>>();
  GroupElement out;
  switch (g.family()) {
    case Family::kLattice:
      require(static_cast<int>(v.size()) == g.dimension(),
              "lattice element has the wrong number of coordinates");
      out = GroupElement::lattice(v);
      break;
    case Family::kHeisenberg:
      require(v.size() == 3, "Heisenberg elements are [a, b, c]");
      out = GroupElement::heisenberg(v[0], v[1], v[2]);
      break;
    case Family::kLocallyFinite: {
      std::vector<int> idx(v.begin(), v.end());
      out = GroupElement::subset(idx);
      break;
    }
  }
  g.check_member(out);
  return out;
}

json element_json(const GroupElement& x) {
  json out = json::array();
  if (x.family == Family::kLocallyFinite) {
    for (int i = 0; i < 64; ++i) {
      if (x.mask() >> i & 1) out.push_back(i + 1);
    }
    return out;
  }
  for (int i = 0; i < x.dim; ++i) out.push_back(x.c[i]);
  return out;
}

AlgebraElement parse_terms(const GroupModel& g, const json& terms) {
  if (!terms.is_array()) throw Error(ErrorCode::kParse, "terms must be an array");
  std::vector<Term> out;
  for (const json& t : terms) {
    out.push_back({parse_element(g, need(t, "x")),
                   Complex(get_or(t, "re", 0.0), get_or(t, "im", 0.0))});
  }
  return AlgebraElement::from_terms(g, std::move(out));
}

json terms_json(const AlgebraElement& f) {
  json out = json::array();
  for (const Term& t : f.terms()) {
    out.push_back({{"x", element_json(t.x)}, {"re", t.c.real()}, {"im", t.c.imag()}});
  }
  return out;
}

AlgebraElement read_jsonl(const GroupModel& g, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open element file '" + path + "'");
  json terms = json::array();
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      terms.push_back(json::parse(line));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kParse, "bad JSON line in '" + path + "': " + e.what());
    }
  }
  return parse_terms(g, terms);
}

std::string to_jsonl(const AlgebraElement& f) {
  std::ostringstream os;
  for (const json& t : terms_json(f)) os << t.dump() << "\n";
  return os.str();
}

GroupModel RunConfig::group() const { return parse_group(group_spec); }

Weight RunConfig::weight(const GroupModel& g, std::size_t i) const {
  require(i < weight_specs.size(), "no weight configured");
  return parse_weight(g, weight_specs[i]);
}

std::vector<NamedElement> RunConfig::elements(const GroupModel& g) const {
  const json specs = element_specs.empty() ? default_elements(g) : element_specs;
  std::vector<NamedElement> out;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const json& e = specs[i];
    NamedElement ne;
    ne.name = get_or<std::string>(e, "name", "element" + std::to_string(i));
    if (e.contains("file")) {
      std::filesystem::path p = e["file"].get<std::string>();
      if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
      ne.element = read_jsonl(g, p.string());
    } else {
      ne.element = parse_terms(g, need(e, "terms"));
    }
    out.push_back(std::move(ne));
  }
  return out;
}

json RunConfig::echo() const {
  json ws = json::array();
  for (const json& w : weight_specs) ws.push_back(w);
  json j = {{"group", group_spec},
            {"weights", ws},
            {"p", p},
            {"seed", seed},
            {"precision",
             {{"trunc", precision.trunc},
              {"tol", precision.tol},
              {"n_max", precision.n_max},
              {"k_max", precision.k_max},
              {"k_cut", precision.k_cut},
              {"sum_n_max", precision.sum_n_max},
              {"growth_n_max", precision.growth_n_max},
              {"margin", precision.margin},
              {"support_cap", precision.support_cap}}},
            {"checks",
             {{"axiom_radius", checks.axiom_radius},
              {"axiom_samples", checks.axiom_samples},
              {"pair_radius", checks.pair_radius},
              {"diff_norm_trials", checks.diff_norm_trials},
              {"diff_norm_radius", checks.diff_norm_radius},
              {"probe_n_max", checks.probe_n_max}}}};
  if (preset) j["case"] = *preset;
  if (s) j["s"] = *s;
  if (r) j["r"] = *r;
  return j;
}

RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kParse, "config must be a JSON object");
  try {
    RunConfig c;
    c.base_dir = get_or<std::string>(j, "base_dir", "");
    if (j.contains("case")) {
      const std::string k = j["case"].get<std::string>();
      if (k != "i" && k != "ii" && k != "iii" && k != "iv") {
        throw Error(ErrorCode::kParse, "case must be one of i, ii, iii, iv");
      }
      c.preset = k;
      c.group_spec = preset_group(k);
      c.weight_specs = {preset_weight(k)};
      c.s = preset_sr(k).first;
      c.r = preset_sr(k).second;
      if (k == "iv") {
        c.notes.push_back(
            "case (iv) needs a group of intermediate growth; none is in scope, "
            "so the run uses H3(Z) (polynomial growth) with the same weight");
      }
    }
    if (j.contains("group")) c.group_spec = j["group"];
    if (c.group_spec.is_null()) throw Error(ErrorCode::kParse, "missing field 'group'");
    if (j.contains("weight")) {
      c.weight_specs = {j["weight"]};
      c.weights_given = true;
    }
    if (j.contains("weights")) {
      if (!j["weights"].is_array()) throw Error(ErrorCode::kParse, "'weights' must be an array");
      c.weight_specs.clear();
      for (const json& w : j["weights"]) c.weight_specs.push_back(w);
      c.weights_given = true;
    }
    c.weights_given = c.weights_given || c.preset.has_value();
    if (!c.weights_given) {
      if (family_of(c.group_spec) == "locally_finite") {
        throw Error(ErrorCode::kParse, "a weight is required on locally finite groups");
      }
      c.weight_specs = {{{"family", "polynomial"}, {"beta", 0.0}}};  // w = 1
    }
    c.p = get_or(j, "p", 1.0);
    require(c.p >= 1 && std::isfinite(c.p), "p must be >= 1");
    if (j.contains("s")) c.s = j["s"].get<double>();
    if (j.contains("r")) c.r = j["r"].get<double>();
    c.seed = get_or<std::uint64_t>(j, "seed", 1);
    if (j.contains("elements")) c.element_specs = j["elements"];
    if (!c.element_specs.is_array()) throw Error(ErrorCode::kParse, "'elements' must be an array");

    const json pr = j.value("precision", json::object());
    Precision& P = c.precision;
    P.trunc = get_or(pr, "trunc", P.trunc);
    P.tol = get_or(pr, "tol", P.tol);
    P.n_max = get_or(pr, "n_max", P.n_max);
    P.k_max = get_or(pr, "k_max", P.k_max);
    P.k_cut = get_or(pr, "k_cut", P.k_cut);
    P.sum_n_max = get_or(pr, "sum_n_max", P.sum_n_max);
    P.growth_n_max = get_or(pr, "growth_n_max", P.growth_n_max);
    P.margin = get_or(pr, "margin", P.margin);
    P.support_cap = get_or(pr, "support_cap", P.support_cap);
    require(P.trunc >= 0, "trunc must be >= 0");
    require(P.tol > 0 && P.n_max > 0 && P.k_max > 0 && P.k_cut > 0 &&
                P.sum_n_max > 0 && P.growth_n_max > 0 && P.margin > 0 &&
                P.support_cap > 0,
            "precision caps must be positive");

    const json ch = j.value("checks", json::object());
    Checks& K = c.checks;
    K.axiom_radius = get_or(ch, "axiom_radius", K.axiom_radius);
    K.axiom_samples = get_or(ch, "axiom_samples", K.axiom_samples);
    K.pair_radius = get_or(ch, "pair_radius", K.pair_radius);
    K.diff_norm_trials = get_or(ch, "diff_norm_trials", K.diff_norm_trials);
    K.diff_norm_radius = get_or(ch, "diff_norm_radius", K.diff_norm_radius);
    K.probe_n_max = get_or(ch, "probe_n_max", K.probe_n_max);
    require(K.axiom_radius > 0 && K.axiom_samples >= 0 && K.pair_radius > 0 &&
                K.diff_norm_trials >= 0 && K.diff_norm_radius > 0 && K.probe_n_max > 0,
            "check sizes must be positive");
    c.growth_n_max_radius = get_or(j.value("growth", json::object()), "n_max", 12);

    // Validate eagerly so bad specs and missing files fail at parse time.
    const GroupModel g = c.group();
    for (std::size_t i = 0; i < c.weight_specs.size(); ++i) c.weight(g, i);
    c.elements(g);
    return c;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("config: ") + e.what());
  }
}

}  // namespace wconv
