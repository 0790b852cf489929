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

#include "wconv/wconv.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <optional>
#include <string>

#include "core/algebra.hpp"
#include "core/analysis.hpp"
#include "core/commands.hpp"
#include "core/config.hpp"
#include "core/error.hpp"
#include "core/groups.hpp"
#include "core/inversion.hpp"
#include "core/weights.hpp"

struct wconv_group {
  wconv::GroupModel g;
};
struct wconv_weight {
  wconv::Weight w;
};
struct wconv_element {
  wconv::AlgebraElement f;
};

namespace {

thread_local std::string g_last_error;
thread_local std::string g_last_diagnostics = "{}";

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p == nullptr) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

wconv_status fail(wconv_status st, const std::string& msg,
                  const std::string& diag = "{}") {
  g_last_error = msg;
  g_last_diagnostics = diag;
  return st;
}

// Runs body, mapping exceptions to status codes.
template <typename F>
wconv_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    g_last_diagnostics = "{}";
    return WCONV_OK;
  } catch (const wconv::Error& e) {
    return fail(static_cast<wconv_status>(e.code()), e.what(), e.diagnostics().dump());
  } catch (const nlohmann::json::exception& e) {
    return fail(WCONV_PARSE, e.what());
  } catch (const std::bad_alloc&) {
    return fail(WCONV_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(WCONV_INTERNAL, e.what());
  }
}

nlohmann::json parse(const char* text) {
  wconv::require(text != nullptr, "null JSON argument");
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw wconv::Error(wconv::ErrorCode::kParse, e.what());
  }
}

}  // namespace

extern "C" {

const char* wconv_version(void) { return "0.1.0"; }

const char* wconv_status_string(wconv_status status) {
  if (status == WCONV_OK) return "ok";
  if (status < WCONV_INVALID_ARGUMENT || status > WCONV_INTERNAL) return "unknown";
  return wconv::error_code_name(static_cast<wconv::ErrorCode>(status));
}

const char* wconv_last_error(void) { return g_last_error.c_str(); }
const char* wconv_last_error_diagnostics(void) { return g_last_diagnostics.c_str(); }
void wconv_free(void* p) { std::free(p); }

wconv_status wconv_group_create(const char* spec_json, wconv_group** out) {
  return guarded([&] {
    wconv::require(out != nullptr, "null output");
    *out = new wconv_group{wconv::parse_group(parse(spec_json))};
  });
}

void wconv_group_destroy(wconv_group* g) { delete g; }

wconv_status wconv_group_length(const wconv_group* g, const char* x_json, int* out) {
  return guarded([&] {
    wconv::require(g != nullptr && out != nullptr, "null argument");
    *out = g->g.length(wconv::parse_element(g->g, parse(x_json)));
  });
}

wconv_status wconv_group_ball_size(const wconv_group* g, int n, uint64_t* out) {
  return guarded([&] {
    wconv::require(g != nullptr && out != nullptr, "null argument");
    wconv::require(n >= 0, "radius must be >= 0");
    std::uint64_t total = 0;
    for (std::uint64_t s : g->g.sphere_sizes(n)) total += s;
    *out = total;
  });
}

wconv_status wconv_group_growth_report(const wconv_group* g, int n_max, char** out_json) {
  return guarded([&] {
    wconv::require(g != nullptr && out_json != nullptr, "null argument");
    const wconv::GrowthReport r = wconv::growth_report(g->g, n_max);
    nlohmann::json j = {{"group", r.group},
                        {"n_max", r.n_max},
                        {"spheres", r.spheres},
                        {"balls", r.balls},
                        {"fit_from", r.fit_from},
                        {"fit_to", r.fit_to},
                        {"polynomial_degree", r.polynomial_degree},
                        {"exponential_rate", r.exponential_rate}};
    *out_json = dup_string(j.dump());
  });
}

wconv_status wconv_weight_create(const wconv_group* g, const char* spec_json,
                                 wconv_weight** out) {
  return guarded([&] {
    wconv::require(g != nullptr && out != nullptr, "null argument");
    *out = new wconv_weight{wconv::parse_weight(g->g, parse(spec_json))};
  });
}

void wconv_weight_destroy(wconv_weight* w) { delete w; }

wconv_status wconv_weight_eval(const wconv_weight* w, const char* x_json, double* out) {
  return guarded([&] {
    wconv::require(w != nullptr && out != nullptr, "null argument");
    *out = w->w(wconv::parse_element(w->w.group(), parse(x_json)));
  });
}

wconv_status wconv_element_create(const wconv_group* g, const char* terms_json,
                                  wconv_element** out) {
  return guarded([&] {
    wconv::require(g != nullptr && out != nullptr, "null argument");
    *out = new wconv_element{wconv::parse_terms(g->g, parse(terms_json))};
  });
}

wconv_status wconv_element_read_jsonl(const wconv_group* g, const char* path,
                                      wconv_element** out) {
  return guarded([&] {
    wconv::require(g != nullptr && path != nullptr && out != nullptr, "null argument");
    *out = new wconv_element{wconv::read_jsonl(g->g, path)};
  });
}

void wconv_element_destroy(wconv_element* f) { delete f; }

wconv_status wconv_element_to_json(const wconv_element* f, char** out_json) {
  return guarded([&] {
    wconv::require(f != nullptr && out_json != nullptr, "null argument");
    *out_json = dup_string(wconv::terms_json(f->f).dump());
  });
}

wconv_status wconv_element_to_jsonl(const wconv_element* f, char** out) {
  return guarded([&] {
    wconv::require(f != nullptr && out != nullptr, "null argument");
    *out = dup_string(wconv::to_jsonl(f->f));
  });
}

wconv_status wconv_element_support_size(const wconv_element* f, size_t* out) {
  return guarded([&] {
    wconv::require(f != nullptr && out != nullptr, "null argument");
    *out = f->f.support_size();
  });
}

wconv_status wconv_convolve(const wconv_element* f, const wconv_element* g, double trunc,
                            wconv_element** out) {
  return guarded([&] {
    wconv::require(f != nullptr && g != nullptr && out != nullptr, "null argument");
    wconv::ConvolutionOptions opt;
    opt.trunc = trunc;
    *out = new wconv_element{wconv::convolve(f->f, g->f, opt)};
  });
}

wconv_status wconv_involute(const wconv_element* f, wconv_element** out) {
  return guarded([&] {
    wconv::require(f != nullptr && out != nullptr, "null argument");
    *out = new wconv_element{wconv::involute(f->f)};
  });
}

wconv_status wconv_norm(const wconv_element* f, const wconv_weight* w, double p,
                        double* out) {
  return guarded([&] {
    wconv::require(f != nullptr && out != nullptr, "null argument");
    if (w != nullptr) {
      *out = wconv::norm_p_omega(f->f, w->w, p);
    } else {
      *out = wconv::norm_p_omega(f->f, wconv::Weight::polynomial(f->f.group(), 0.0), p);
    }
  });
}

wconv_status wconv_opnorm(const wconv_element* f, int k_max, double* lower, double* upper) {
  return guarded([&] {
    wconv::require(f != nullptr && lower != nullptr && upper != nullptr, "null argument");
    const wconv::NormInterval n = wconv::opnorm_estimate(f->f, k_max);
    *lower = n.lower;
    *upper = n.upper;
  });
}

wconv_status wconv_invert(const wconv_element* a, const wconv_weight* w, double p, double s,
                          double r, char** report_json, wconv_element** inverse) {
  return guarded([&] {
    wconv::require(a != nullptr && w != nullptr, "null argument");
    std::optional<wconv::HolderCertificate> cert;
    if (s > 0) {
      const wconv::AuxiliaryFunction aux = wconv::AuxiliaryFunction::build(w->w, p);
      cert = wconv::estimate_theta(w->w, aux, p, s, r);
    }
    const wconv::InversionReport rep =
        wconv::neumann_invert(a->f, w->w, p, cert ? &*cert : nullptr);
    if (report_json != nullptr) {
      nlohmann::json j = rep.to_json();
      if (cert) j["certificate"] = cert->to_json();
      *report_json = dup_string(j.dump());
    }
    if (inverse != nullptr) *inverse = new wconv_element{rep.inverse};
  });
}

wconv_status wconv_run_command(const char* command, const char* config_json,
                               wconv_run_output* out) {
  return guarded([&] {
    wconv::require(command != nullptr && out != nullptr, "null argument");
    *out = wconv_run_output{nullptr, nullptr, nullptr, 0};
    const wconv::RunConfig cfg = wconv::parse_config(parse(config_json));
    const wconv::CommandResult res = wconv::run_command(command, cfg);
    out->report_json = dup_string(res.report.dump(2));
    out->csv = dup_string(res.csv);
    out->table = dup_string(res.table);
    out->outcome = res.outcome;
  });
}

void wconv_run_output_free(wconv_run_output* out) {
  if (out == nullptr) return;
  std::free(out->report_json);
  std::free(out->csv);
  std::free(out->table);
  *out = wconv_run_output{nullptr, nullptr, nullptr, 0};
}

}  // extern "C"
