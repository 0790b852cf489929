/* Copyright 2026 The wconv Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <math.h>
#include <stdio.h>
#include <string.h>

#include "wconv/wconv.h"

static int failures = 0;

#define CHECK(cond)                                             \
  do {                                                          \
    if (!(cond)) {                                              \
      fprintf(stderr, "%s:%d: CHECK(%s) failed: %s\n", __FILE__, \
              __LINE__, #cond, wconv_last_error());              \
      ++failures;                                               \
    }                                                           \
  } while (0)

static void test_groups(void) {
  wconv_group* h = NULL;
  CHECK(wconv_group_create("{\"family\": \"heisenberg\"}", &h) == WCONV_OK);
  int len = -1;
  CHECK(wconv_group_length(h, "[0, 0, 1]", &len) == WCONV_OK && len == 4);
  CHECK(wconv_group_length(h, "[1, 1, 1]", &len) == WCONV_OK && len == 2);
  uint64_t ball = 0;
  CHECK(wconv_group_ball_size(h, 2, &ball) == WCONV_OK && ball == 17);
  CHECK(wconv_group_length(h, "[1, 2]", &len) == WCONV_INVALID_ARGUMENT);
  CHECK(strlen(wconv_last_error()) > 0);
  CHECK(wconv_group_ball_size(h, 1000, &ball) == WCONV_RADIUS_EXCEEDED);
  char* rep = NULL;
  CHECK(wconv_group_growth_report(h, 6, &rep) == WCONV_OK);
  CHECK(rep != NULL && strstr(rep, "polynomial_degree") != NULL);
  wconv_free(rep);
  wconv_group_destroy(h);

  wconv_group* bad = NULL;
  CHECK(wconv_group_create("{\"family\": \"free\"}", &bad) == WCONV_PARSE);
  CHECK(bad == NULL);
  CHECK(wconv_group_create("not json", &bad) == WCONV_PARSE);
}

static void test_algebra(void) {
  wconv_group* z = NULL;
  wconv_weight* w = NULL;
  CHECK(wconv_group_create("{\"family\": \"lattice\", \"dim\": 1}", &z) == WCONV_OK);
  CHECK(wconv_weight_create(z, "{\"family\": \"polynomial\", \"beta\": 2}", &w) == WCONV_OK);
  double v = 0;
  CHECK(wconv_weight_eval(w, "[3]", &v) == WCONV_OK && fabs(v - 16.0) < 1e-12);

  wconv_element *a = NULL, *b = NULL, *ab = NULL;
  CHECK(wconv_element_create(z, "[{\"x\": [1], \"re\": 1}]", &a) == WCONV_OK);
  CHECK(wconv_element_create(z, "[{\"x\": [2], \"re\": 1}]", &b) == WCONV_OK);
  CHECK(wconv_convolve(a, b, 0.0, &ab) == WCONV_OK);
  CHECK(wconv_norm(ab, w, 1.0, &v) == WCONV_OK && fabs(v - 16.0) < 1e-12);
  size_t n = 0;
  CHECK(wconv_element_support_size(ab, &n) == WCONV_OK && n == 1);
  char* js = NULL;
  CHECK(wconv_element_to_json(ab, &js) == WCONV_OK && strstr(js, "[3]") != NULL);
  wconv_free(js);

  wconv_element* g = NULL;
  CHECK(wconv_element_create(z, "[{\"x\": [0], \"re\": 1}, {\"x\": [1], \"re\": -0.5}]", &g) ==
        WCONV_OK);
  double lo = 0, hi = 0;
  CHECK(wconv_opnorm(g, 12, &lo, &hi) == WCONV_OK);
  CHECK(lo >= 1.45 && lo <= 1.5 + 1e-12 && hi >= 1.5 - 1e-12);
  CHECK(wconv_norm(g, NULL, 1.0, &v) == WCONV_OK && fabs(v - 1.5) < 1e-15);

  char* report = NULL;
  wconv_element* inv = NULL;
  CHECK(wconv_invert(g, w, 1.0, 4.0, 2.5, &report, &inv) == WCONV_OK);
  CHECK(report != NULL && strstr(report, "\"product_bound\"") != NULL);
  CHECK(wconv_norm(inv, w, 1.0, &v) == WCONV_OK && fabs(v - 12.0) < 1e-8);
  wconv_free(report);
  wconv_element_destroy(inv);

  wconv_element* d = NULL;
  CHECK(wconv_element_create(z, "[{\"x\": [0], \"re\": 1}, {\"x\": [1], \"re\": -1}]", &d) ==
        WCONV_OK);
  report = NULL;
  CHECK(wconv_invert(d, w, 1.0, 0.0, 0.0, &report, NULL) == WCONV_NOT_INVERTIBLE);
  CHECK(strstr(wconv_last_error_diagnostics(), "c_norm_B") != NULL);

  wconv_group* h = NULL;
  wconv_element* x = NULL;
  CHECK(wconv_group_create("{\"family\": \"heisenberg\"}", &h) == WCONV_OK);
  CHECK(wconv_element_create(h, "[{\"x\": [0, 0, 0], \"re\": 1}]", &x) == WCONV_OK);
  CHECK(wconv_convolve(a, x, 0.0, &ab) == WCONV_FAMILY_MISMATCH);

  wconv_element_destroy(x);
  wconv_group_destroy(h);
  wconv_element_destroy(d);
  wconv_element_destroy(g);
  wconv_element_destroy(a);
  wconv_element_destroy(b);
  wconv_weight_destroy(w);
  wconv_group_destroy(z);
}

static void test_commands(void) {
  wconv_run_output out;
  CHECK(wconv_run_command("pipeline", "{\"case\": \"i\"}", &out) == WCONV_OK);
  CHECK(out.outcome == 0);
  CHECK(strstr(out.report_json, "\"wconv-report/1\"") != NULL);
  CHECK(strstr(out.report_json, "generated_at") == NULL);
  wconv_run_output_free(&out);

  CHECK(wconv_run_command("pipeline",
                          "{\"group\": {\"family\": \"lattice\"},"
                          " \"weight\": {\"family\": \"subexp_log\", \"gamma\": 1, \"C\": 1},"
                          " \"s\": 5, \"r\": 2.5}",
                          &out) == WCONV_OK);
  CHECK(out.outcome == 2);
  CHECK(strstr(out.report_json, "\"halted_at\": \"growth\"") != NULL);
  wconv_run_output_free(&out);

  CHECK(wconv_run_command("nope", "{\"case\": \"i\"}", &out) == WCONV_INVALID_ARGUMENT);
  CHECK(wconv_run_command("pipeline", "{\"case\": 3", &out) == WCONV_PARSE);
}

int main(void) {
  CHECK(strlen(wconv_version()) > 0);
  CHECK(strcmp(wconv_status_string(WCONV_NOT_INVERTIBLE), "not_certified_invertible") == 0);
  test_groups();
  test_algebra();
  test_commands();
  if (failures) {
    fprintf(stderr, "%d check(s) failed\n", failures);
    return 1;
  }
  printf("all C API checks passed\n");
  return 0;
}
