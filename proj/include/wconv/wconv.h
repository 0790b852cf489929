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

/* C interface to the wconv library. Every function returns a wconv_status;
 * on failure wconv_last_error() describes the error for the calling thread.
 * Strings returned through char** are owned by the caller: release them with
 * wconv_free(). */

#ifndef WCONV_WCONV_H
#define WCONV_WCONV_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(WCONV_BUILDING_LIBRARY)
#define WCONV_API __declspec(dllexport)
#else
#define WCONV_API __declspec(dllimport)
#endif
#else
#define WCONV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wconv_status {
  WCONV_OK = 0,
  WCONV_INVALID_ARGUMENT = 1,
  WCONV_FAMILY_MISMATCH = 2,
  WCONV_RADIUS_EXCEEDED = 3,
  WCONV_SIZE_CAP = 4,
  WCONV_NOT_INVERTIBLE = 5,
  WCONV_NOT_CONVERGED = 6,
  WCONV_NO_FEASIBLE_THETA = 7,
  WCONV_SUM_INCONCLUSIVE = 8,
  WCONV_PARSE = 9,
  WCONV_IO = 10,
  WCONV_INTERNAL = 11
} wconv_status;

typedef struct wconv_group wconv_group;
typedef struct wconv_weight wconv_weight;
typedef struct wconv_element wconv_element;

/* Output of wconv_run_command; free with wconv_run_output_free. */
typedef struct wconv_run_output {
  char* report_json;
  char* csv;   /* empty string when the command writes no CSV */
  char* table; /* human-readable summary */
  int outcome; /* 0 verified, 2 refuted, 3 inconclusive */
} wconv_run_output;

WCONV_API const char* wconv_version(void);
WCONV_API const char* wconv_status_string(wconv_status status);
/* Message and JSON diagnostics of the last failure on this thread. */
WCONV_API const char* wconv_last_error(void);
WCONV_API const char* wconv_last_error_diagnostics(void);
WCONV_API void wconv_free(void* p);

/* Groups. spec_json uses the "group" object of the run config. */
WCONV_API wconv_status wconv_group_create(const char* spec_json, wconv_group** out);
WCONV_API void wconv_group_destroy(wconv_group* g);
/* x_json: lattice coordinates, [a, b, c], or 1-based generator indices. */
WCONV_API wconv_status wconv_group_length(const wconv_group* g, const char* x_json,
                                          int* out);
WCONV_API wconv_status wconv_group_ball_size(const wconv_group* g, int n, uint64_t* out);
WCONV_API wconv_status wconv_group_growth_report(const wconv_group* g, int n_max,
                                                 char** out_json);

/* Weights. spec_json uses the "weight" object of the run config. */
WCONV_API wconv_status wconv_weight_create(const wconv_group* g, const char* spec_json,
                                           wconv_weight** out);
WCONV_API void wconv_weight_destroy(wconv_weight* w);
WCONV_API wconv_status wconv_weight_eval(const wconv_weight* w, const char* x_json,
                                         double* out);

/* Elements: terms_json is [{"x": ..., "re": ..., "im": ...}, ...]. */
WCONV_API wconv_status wconv_element_create(const wconv_group* g, const char* terms_json,
                                            wconv_element** out);
WCONV_API wconv_status wconv_element_read_jsonl(const wconv_group* g, const char* path,
                                                wconv_element** out);
WCONV_API void wconv_element_destroy(wconv_element* f);
WCONV_API wconv_status wconv_element_to_json(const wconv_element* f, char** out_json);
WCONV_API wconv_status wconv_element_to_jsonl(const wconv_element* f, char** out);
WCONV_API wconv_status wconv_element_support_size(const wconv_element* f, size_t* out);
WCONV_API wconv_status wconv_convolve(const wconv_element* f, const wconv_element* g,
                                      double trunc, wconv_element** out);
WCONV_API wconv_status wconv_involute(const wconv_element* f, wconv_element** out);
/* ||f||_{p,w}; pass w = NULL for the unweighted norm. */
WCONV_API wconv_status wconv_norm(const wconv_element* f, const wconv_weight* w, double p,
                                  double* out);
/* Certified interval for the operator norm on l2(G). */
WCONV_API wconv_status wconv_opnorm(const wconv_element* f, int k_max, double* lower,
                                    double* upper);

/* Neumann inversion with an optional certificate built from (s, r). Pass
 * s <= 0 to skip the certificate. report_json gets the full report and
 * inverse (optional) the computed inverse. */
WCONV_API wconv_status wconv_invert(const wconv_element* a, const wconv_weight* w, double p,
                                    double s, double r, char** report_json,
                                    wconv_element** inverse);

/* Runs a CLI subcommand on a JSON run config. */
WCONV_API wconv_status wconv_run_command(const char* command, const char* config_json,
                                         wconv_run_output* out);
WCONV_API void wconv_run_output_free(wconv_run_output* out);

#ifdef __cplusplus
}
#endif

#endif /* WCONV_WCONV_H */
