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

#include "core/commands.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include "core/analysis.hpp"
#include "core/error.hpp"
#include "core/inversion.hpp"
#include "core/weights.hpp"

namespace wconv {

using nlohmann::json;

namespace {

constexpr double kBoundSlack = 1e-9;

int outcome_of(Status s) {
  switch (s) {
    case Status::kVerified: return kOutcomeVerified;
    case Status::kRefuted: return kOutcomeRefuted;
    case Status::kInconclusive: return kOutcomeInconclusive;
  }
  return kOutcomeError;
}

// Refuted dominates inconclusive dominates verified.
int combine(int a, int b) {
  if (a == kOutcomeRefuted || b == kOutcomeRefuted) return kOutcomeRefuted;
  if (a == kOutcomeInconclusive || b == kOutcomeInconclusive) return kOutcomeInconclusive;
  return kOutcomeVerified;
}

const char* outcome_name(int o) {
  switch (o) {
    case kOutcomeVerified: return "verified";
    case kOutcomeRefuted: return "refuted";
    case kOutcomeInconclusive: return "inconclusive";
  }
  return "error";
}

bool is_math_error(ErrorCode c) {
  switch (c) {
    case ErrorCode::kNotInvertible:
    case ErrorCode::kNotConverged:
    case ErrorCode::kNoFeasibleTheta:
    case ErrorCode::kSumInconclusive:
    case ErrorCode::kSizeCap:
    case ErrorCode::kRadiusExceeded:
      return true;
    default:
      return false;
  }
}

int outcome_of(const Error& e) {
  return e.code() == ErrorCode::kNoFeasibleTheta ? kOutcomeRefuted : kOutcomeInconclusive;
}

json error_json(const Error& e) {
  return {{"error", error_code_name(e.code())},
          {"message", e.what()},
          {"diagnostics", e.diagnostics()}};
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

class Table {
 public:
  void title(const std::string& t) { os_ << t << "\n"; }
  void row(const std::string& k, const std::string& v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "  %-30s ", k.c_str());
    os_ << buf << v << "\n";
  }
  void row(const std::string& k, double v) { row(k, fmt(v)); }
  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
};

struct Context {
  const RunConfig& cfg;
  GroupModel g;
  json report;
  Table table;
  int outcome = kOutcomeVerified;

  explicit Context(const RunConfig& c) : cfg(c), g(c.group()) {}
};

json base_report(const std::string& name, const RunConfig& cfg) {
  json r = {{"schema", kReportSchema},
            {"command", name},
            {"config", cfg.echo()},
            {"seed", cfg.seed}};
  r["notes"] = cfg.notes;
  return r;
}

std::pair<double, double> need_sr(const RunConfig& cfg, const json& weight_spec) {
  std::optional<double> s = cfg.s, r = cfg.r;
  if (weight_spec.contains("s")) s = weight_spec["s"].get<double>();
  if (weight_spec.contains("r")) r = weight_spec["r"].get<double>();
  if (!s || !r) throw Error(ErrorCode::kInvalidArgument, "this command needs s and r");
  return {*s, *r};
}

bool has_sr(const RunConfig& cfg, const json& weight_spec) {
  return (cfg.s || weight_spec.contains("s")) && (cfg.r || weight_spec.contains("r"));
}

ThetaOptions theta_options(const RunConfig& cfg) {
  ThetaOptions t;
  t.sum_n_max = cfg.precision.sum_n_max;
  t.sum_margin = cfg.precision.margin;
  return t;
}

InversionOptions inversion_options(const RunConfig& cfg) {
  InversionOptions o;
  o.tol = cfg.precision.tol;
  o.n_max = cfg.precision.n_max;
  o.k_max = cfg.precision.k_max;
  o.k_cut = cfg.precision.k_cut;
  o.trunc = cfg.precision.trunc;
  o.power.support_cap = cfg.precision.support_cap;
  return o;
}

struct BoundCheck {
  bool product_ok = true;
  bool asymptotic_ok = true;
};

// Compared in log space: the bounds overflow doubles for moderate nu.
BoundCheck check_bounds(const InversionReport& rep) {
  BoundCheck b;
  if (rep.product) {
    const double lp = rep.product->log_value;
    b.product_ok = std::log(rep.actual) <= lp + kBoundSlack;
    if (rep.asymptotic) b.asymptotic_ok = lp <= rep.asymptotic->log_value + kBoundSlack;
  }
  return b;
}

// Plain value when it fits a double, exp(log) otherwise.
std::string fmt_bound(double value, double log_value) {
  if (std::isfinite(value)) return fmt(value);
  return "exp(" + fmt(log_value) + ")";
}

// Certificate for one weight; nullopt (with a note) when none can be built.
std::optional<HolderCertificate> try_certificate(const RunConfig& cfg, const Weight& w,
                                                 const json& spec, json& out) {
  if (!has_sr(cfg, spec)) {
    out = {{"status", "skipped"}, {"reason", "s and r not configured"}};
    return std::nullopt;
  }
  const auto [s, r] = need_sr(cfg, spec);
  try {
    const AuxiliaryFunction aux = AuxiliaryFunction::build(w, cfg.p);
    HolderCertificate cert = estimate_theta(w, aux, cfg.p, s, r, theta_options(cfg));
    out = cert.to_json();
    return cert;
  } catch (const Error& e) {
    if (!is_math_error(e.code())) throw;
    out = error_json(e);
    return std::nullopt;
  }
}

// ---------------------------------------------------------------- commands

void cmd_verify_weight(Context& c) {
  const RunConfig& cfg = c.cfg;
  json weights = json::array();
  c.table.title("verify-weight on " + c.g.name());
  for (std::size_t i = 0; i < cfg.weight_specs.size(); ++i) {
    const Weight w = cfg.weight(c.g, i);
    json entry = {{"weight", w.describe()}};
    std::vector<ConditionReport> checks;
    checks.push_back(check_weight_axioms(w, cfg.checks.axiom_radius,
                                         cfg.checks.axiom_samples, cfg.seed));
    const AuxiliaryFunction aux = AuxiliaryFunction::build(w, cfg.p);
    checks.push_back(check_aux_inequality(aux, cfg.checks.axiom_radius,
                                          cfg.checks.pair_radius,
                                          cfg.checks.axiom_samples, cfg.seed));
    if (w.is_profile()) {
      checks.push_back(check_growth_condition(w, cfg.precision.growth_n_max,
                                              cfg.precision.margin));
    }
    if (has_sr(cfg, cfg.weight_specs[i])) {
      const auto [s, r] = need_sr(cfg, cfg.weight_specs[i]);
      checks.push_back(check_summability(aux, s, r, cfg.precision.sum_n_max,
                                         cfg.precision.margin));
    } else {
      entry["summability"] = "skipped: s and r not configured";
    }
    json list = json::array();
    for (const ConditionReport& r : checks) {
      list.push_back(r.to_json());
      c.outcome = combine(c.outcome, outcome_of(r.status));
      c.table.row(w.label() + " " + r.condition, status_name(r.status));
    }
    entry["checks"] = list;
    weights.push_back(entry);
  }
  c.report["weights"] = weights;
}

void cmd_estimate_theta(Context& c) {
  const RunConfig& cfg = c.cfg;
  const Weight w = cfg.weight(c.g);
  const auto [s, r] = need_sr(cfg, cfg.weight_specs.front());
  const AuxiliaryFunction aux = AuxiliaryFunction::build(w, cfg.p);
  c.table.title("estimate-theta on " + c.g.name() + ", " + w.label());
  try {
    const HolderCertificate cert = estimate_theta(w, aux, cfg.p, s, r, theta_options(cfg));
    c.report["certificate"] = cert.to_json();
    c.table.row("theta", cert.theta);
    c.table.row("alpha", cert.alpha);
    c.table.row("C_H", cert.holder_constant);
    c.table.row("C", cert.constant);
    c.table.row("sum route", cert.sum_route);
  } catch (const Error& e) {
    if (!is_math_error(e.code())) throw;
    c.report["certificate"] = error_json(e);
    c.outcome = outcome_of(e);
    c.table.row("result", error_code_name(e.code()));
    c.table.row("message", e.what());
  }
}

void inversion_rows(Table& t, const InversionReport& rep) {
  t.row("||a||_A", rep.norm_a_A);
  t.row("||a||_B", "[" + fmt(rep.norm_a_B.lower) + ", " + fmt(rep.norm_a_B.upper) + "]");
  t.row("||a^-1||_B", "[" + fmt(rep.inv_norm_B.lower) + ", " + fmt(rep.inv_norm_B.upper) + "]");
  t.row("||c||_B", "[" + fmt(rep.c_norm_B.lower) + ", " + fmt(rep.c_norm_B.upper) + "]");
  t.row("nu", rep.nu);
  t.row("Neumann terms", std::to_string(rep.terms));
  t.row("residual", rep.residual.max());
  t.row("actual ||a^-1||_{p,w}", rep.actual);
  t.row("product bound", rep.product ? fmt_bound(rep.product->value, rep.product->log_value)
                                     : std::string("NA"));
  t.row("asymptotic bound",
        rep.asymptotic ? fmt_bound(rep.asymptotic->value, rep.asymptotic->log_value)
                       : "NA (" + rep.asymptotic_note + ")");
}

void cmd_invert(Context& c) {
  const RunConfig& cfg = c.cfg;
  const Weight w = cfg.weight(c.g);
  json cert_json;
  const auto cert = try_certificate(cfg, w, cfg.weight_specs.front(), cert_json);
  c.report["certificate"] = cert_json;
  json items = json::array();
  for (const NamedElement& ne : cfg.elements(c.g)) {
    c.table.title("invert " + ne.name + " on " + c.g.name() + ", " + w.label());
    json item = {{"element", ne.name}};
    try {
      const InversionReport rep =
          neumann_invert(ne.element, w, cfg.p, cert ? &*cert : nullptr, inversion_options(cfg));
      item["report"] = rep.to_json();
      item["inverse"] = terms_json(rep.inverse);
      const BoundCheck b = check_bounds(rep);
      item["bound_holds"] = b.product_ok;
      item["ordering_holds"] = b.asymptotic_ok;
      if (!b.product_ok || !b.asymptotic_ok) c.outcome = combine(c.outcome, kOutcomeRefuted);
      inversion_rows(c.table, rep);
    } catch (const Error& e) {
      if (!is_math_error(e.code())) throw;
      item["error"] = error_json(e);
      c.outcome = combine(c.outcome, outcome_of(e));
      c.table.row("result", error_code_name(e.code()));
      c.table.row("message", e.what());
    }
    items.push_back(item);
  }
  c.report["inversions"] = items;
}

constexpr const char* kBoundCsvHeader =
    "# wconv bound-compare csv v1\n"
    "element,weight,p,actual,product_bound,asymptotic_bound,nu\n";

void cmd_bound_compare(Context& c, std::string& csv) {
  const RunConfig& cfg = c.cfg;
  csv = kBoundCsvHeader;
  json rows = json::array();
  const std::vector<NamedElement> elements = cfg.elements(c.g);
  c.table.title("bound-compare on " + c.g.name());
  for (std::size_t i = 0; i < cfg.weight_specs.size(); ++i) {
    const Weight w = cfg.weight(c.g, i);
    json cert_json;
    const auto cert = try_certificate(cfg, w, cfg.weight_specs[i], cert_json);
    if (!cert) c.outcome = combine(c.outcome, kOutcomeInconclusive);
    for (const NamedElement& ne : elements) {
      json row = {{"element", ne.name}, {"weight", w.label()}, {"p", cfg.p},
                  {"certificate", cert_json}};
      std::string actual = "NA", product = "NA", asym = "NA", nu = "NA";
      try {
        const InversionReport rep = neumann_invert(ne.element, w, cfg.p,
                                                   cert ? &*cert : nullptr,
                                                   inversion_options(cfg));
        actual = fmt(rep.actual);
        nu = fmt(rep.nu);
        row["actual"] = rep.actual;
        row["nu"] = rep.nu;
        if (rep.product) {
          product = fmt_bound(rep.product->value, rep.product->log_value);
          row["product_bound"] = rep.product->to_json();
        }
        if (rep.asymptotic) {
          asym = fmt_bound(rep.asymptotic->value, rep.asymptotic->log_value);
          row["asymptotic_bound"] = rep.asymptotic->to_json();
        }
        if (!rep.asymptotic_note.empty()) row["asymptotic_note"] = rep.asymptotic_note;
        const BoundCheck b = check_bounds(rep);
        row["ordering_holds"] = b.product_ok && b.asymptotic_ok;
        if (!b.product_ok || !b.asymptotic_ok) c.outcome = combine(c.outcome, kOutcomeRefuted);
      } catch (const Error& e) {
        if (!is_math_error(e.code())) throw;
        row["error"] = error_json(e);
        c.outcome = combine(c.outcome, outcome_of(e));
      }
      csv += ne.name + "," + w.label() + "," + fmt(cfg.p) + "," + actual + "," + product +
             "," + asym + "," + nu + "\n";
      c.table.row(ne.name + " / " + w.label(),
                  "actual " + actual + "  product " + product + "  asymptotic " + asym +
                      "  nu " + nu);
      rows.push_back(row);
    }
  }
  c.report["rows"] = rows;
}

void cmd_growth(Context& c, std::string& csv) {
  const GrowthReport gr = growth_report(c.g, c.cfg.growth_n_max_radius);
  json j = {{"group", gr.group},
            {"n_max", gr.n_max},
            {"spheres", gr.spheres},
            {"balls", gr.balls},
            {"fit_from", gr.fit_from},
            {"fit_to", gr.fit_to},
            {"polynomial_degree", gr.polynomial_degree},
            {"exponential_rate", gr.exponential_rate}};
  c.report["growth"] = j;
  csv = "# wconv growth csv v1\nn,sphere,ball\n";
  for (std::size_t n = 0; n < gr.spheres.size(); ++n) {
    csv += std::to_string(n) + "," + std::to_string(gr.spheres[n]) + "," +
           std::to_string(gr.balls[n]) + "\n";
  }
  c.table.title("growth of " + gr.group);
  c.table.row("n_max", std::to_string(gr.n_max));
  c.table.row("ball size", std::to_string(gr.balls.back()));
  c.table.row("fitted degree", gr.polynomial_degree);
  c.table.row("fitted exponential rate", gr.exponential_rate);
}

// Each stage either passes (verified/skipped) or halts the run.
void cmd_pipeline(Context& c) {
  const RunConfig& cfg = c.cfg;
  const Weight w = cfg.weight(c.g);
  const json& spec = cfg.weight_specs.front();
  const auto [s, r] = need_sr(cfg, spec);
  const AuxiliaryFunction aux = AuxiliaryFunction::build(w, cfg.p);
  json stages = json::array();
  c.report["halted_at"] = nullptr;
  c.table.title("pipeline on " + c.g.name() + ", " + w.label() + ", p = " + fmt(cfg.p));

  auto record = [&](const std::string& stage, int outcome, json body) {
    const char* status = outcome == kOutcomeVerified ? "verified" : outcome_name(outcome);
    body["stage"] = stage;
    body["stage_status"] = status;
    stages.push_back(std::move(body));
    c.table.row(stage, status);
    if (outcome != kOutcomeVerified) {
      c.outcome = outcome;
      c.report["halted_at"] = stage;
      return false;
    }
    return true;
  };
  auto condition = [&](const std::string& stage, const ConditionReport& rep) {
    return record(stage, outcome_of(rep.status), rep.to_json());
  };
  auto skipped = [&](const std::string& stage, const std::string& why) {
    stages.push_back({{"stage", stage}, {"stage_status", "skipped"}, {"reason", why}});
    c.table.row(stage, "skipped");
  };
  auto finish = [&] { c.report["stages"] = stages; };

  if (!condition("axioms", check_weight_axioms(w, cfg.checks.axiom_radius,
                                               cfg.checks.axiom_samples, cfg.seed))) {
    return finish();
  }
  if (!condition("aux_inequality",
                 check_aux_inequality(aux, cfg.checks.axiom_radius, cfg.checks.pair_radius,
                                      cfg.checks.axiom_samples, cfg.seed))) {
    return finish();
  }
  if (!condition("convolution_inequality",
                 check_convolution_inequality(aux, cfg.checks.diff_norm_trials,
                                              cfg.checks.diff_norm_radius, cfg.seed))) {
    return finish();
  }
  if (w.is_profile()) {
    if (!condition("growth", check_growth_condition(w, cfg.precision.growth_n_max,
                                                    cfg.precision.margin))) {
      return finish();
    }
  } else {
    skipped("growth", "weakly subadditive weight");
  }
  if (!condition("summability",
                 check_summability(aux, s, r, cfg.precision.sum_n_max, cfg.precision.margin))) {
    return finish();
  }

  HolderCertificate cert;
  try {
    cert = estimate_theta(w, aux, cfg.p, s, r, theta_options(cfg));
  } catch (const Error& e) {
    if (!is_math_error(e.code())) throw;
    record("certificate", outcome_of(e), error_json(e));
    return finish();
  }
  if (!record("certificate", kOutcomeVerified, {{"certificate", cert.to_json()}})) {
    return finish();
  }
  c.report["certificate"] = cert.to_json();

  if (!condition("diff_norm", check_diff_norm(cert, w, cfg.p, cfg.checks.diff_norm_trials,
                                              cfg.checks.diff_norm_radius, cfg.seed))) {
    return finish();
  }
  if (c.g.family() == Family::kLattice && c.g.dimension() == 1) {
    if (!condition("necessary_condition",
                   necessary_condition_probe(w, cert, cfg.checks.probe_n_max))) {
      return finish();
    }
  } else {
    skipped("necessary_condition", "probe is defined on Z only");
  }

  json inversions = json::array();
  int inv_outcome = kOutcomeVerified;
  int bound_outcome = kOutcomeVerified;
  json bounds = json::array();
  for (const NamedElement& ne : cfg.elements(c.g)) {
    json item = {{"element", ne.name}};
    try {
      const InversionReport rep =
          neumann_invert(ne.element, w, cfg.p, &cert, inversion_options(cfg));
      item["report"] = rep.to_json();
      const BoundCheck b = check_bounds(rep);
      bounds.push_back({{"element", ne.name},
                        {"actual", rep.actual},
                        {"log_product_bound", rep.product->log_value},
                        {"log_asymptotic_bound",
                         rep.asymptotic ? json(rep.asymptotic->log_value) : json("NA")},
                        {"actual_le_product", b.product_ok},
                        {"product_le_asymptotic", b.asymptotic_ok}});
      if (!b.product_ok || !b.asymptotic_ok) bound_outcome = kOutcomeRefuted;
    } catch (const Error& e) {
      if (!is_math_error(e.code())) throw;
      item["error"] = error_json(e);
      inv_outcome = combine(inv_outcome, outcome_of(e));
    }
    inversions.push_back(item);
  }
  if (!record("inversion", inv_outcome, {{"inversions", inversions}})) return finish();
  record("bounds", bound_outcome, {{"rows", bounds}});
  finish();
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {
      "verify-weight", "estimate-theta", "invert", "bound-compare", "growth", "pipeline"};
  return names;
}

CommandResult run_command(const std::string& name, const RunConfig& cfg) {
  Context c(cfg);
  c.report = base_report(name, cfg);
  std::string csv;
  if (name == "verify-weight") {
    cmd_verify_weight(c);
  } else if (name == "estimate-theta") {
    cmd_estimate_theta(c);
  } else if (name == "invert") {
    cmd_invert(c);
  } else if (name == "bound-compare") {
    cmd_bound_compare(c, csv);
  } else if (name == "growth") {
    cmd_growth(c, csv);
  } else if (name == "pipeline") {
    cmd_pipeline(c);
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown command '" + name + "'");
  }
  c.report["outcome"] = outcome_name(c.outcome);
  c.report["exit_code"] = c.outcome;
  c.table.row("outcome", outcome_name(c.outcome));

  CommandResult res;
  res.report = std::move(c.report);
  res.outcome = c.outcome;
  res.csv = std::move(csv);
  res.table = c.table.str();
  return res;
}

}  // namespace wconv
