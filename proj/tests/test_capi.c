/* SPDX-License-Identifier: Apache-2.0
 *
 * The C interface compiled as C. Exits nonzero on the first failed check. */
#include <math.h>
#include <stdio.h>
#include <string.h>

#include "warplab/warplab.h"

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                 \
    }                                                             \
  } while (0)

static void run_bundled(void) {
  wl_scenario* sc = NULL;
  EXPECT(wl_scenario_load(WARPLAB_SCENARIO_DIR "/two-plus-cos-q2.json", &sc) == WL_OK);
  if (!sc) return;
  EXPECT(strcmp(wl_scenario_name(sc), "two-plus-cos-q2") == 0);
  EXPECT(wl_scenario_suite(sc) == WL_SUITE_THEOREM1);

  wl_run_options o;
  wl_run_options_init(&o);
  o.refine = 3;
  wl_report* r = NULL;
  EXPECT(wl_run(sc, &o, &r) == WL_OK);
  if (r) {
    EXPECT(wl_report_passed(r) == 1);
    EXPECT(wl_report_check_count(r) >= 3);
    wl_check c;
    EXPECT(wl_report_check(r, 0, &c) == WL_OK);
    EXPECT(strcmp(c.id, "theorem1.sides") == 0);
    EXPECT(fabs(c.lhs - 8 * M_PI * M_PI) <= 1e-6 * 8 * M_PI * M_PI);
    EXPECT(c.refinement_levels == 3);
    wl_refinement_entry e;
    EXPECT(wl_report_refinement(r, 0, 0, &e) == WL_OK);
    EXPECT(isnan(e.order));
    EXPECT(wl_report_refinement(r, 0, 3, &e) == WL_INVALID_ARGUMENT);
    EXPECT(wl_report_check(r, 1000, &c) == WL_INVALID_ARGUMENT);

    const char* json = wl_report_json(r);
    wl_report* back = NULL;
    EXPECT(wl_report_from_json(json, strlen(json), &back) == WL_OK);
    if (back) {
      EXPECT(strcmp(wl_report_json(back), json) == 0);
      wl_report_free(back);
    }
    EXPECT(strncmp(wl_report_csv(r), "scenario,id,", 12) == 0);
    EXPECT(strncmp(wl_report_refinement_csv(r), "scenario,id,level,", 18) == 0);
    wl_report_free(r);
  }
  wl_scenario_free(sc);
}

static void errors(void) {
  const char* bad = "{\n  \"name\": 1,\n  oops\n}";
  wl_scenario* sc = NULL;
  EXPECT(wl_scenario_parse(bad, strlen(bad), &sc) == WL_PARSE_ERROR);
  EXPECT(sc == NULL);
  EXPECT(wl_last_error_line() == 3);
  EXPECT(wl_last_error_column() > 0);
  EXPECT(strlen(wl_last_error()) > 0);

  EXPECT(wl_scenario_load("/nonexistent.json", &sc) == WL_IO_ERROR);
  EXPECT(wl_last_error_line() == 0);
  EXPECT(wl_scenario_parse(NULL, 0, &sc) == WL_INVALID_ARGUMENT);

  EXPECT(wl_scenario_load(WARPLAB_TEST_DATA "/nonconvergent.json", &sc) == WL_OK);
  if (sc) {
    wl_report* r = NULL;
    EXPECT(wl_run(sc, NULL, &r) == WL_NONCONVERGENCE);
    EXPECT(r == NULL);
    EXPECT(strstr(wl_last_error(), "nonconvergent") != NULL);
    wl_scenario_free(sc);
  }

  int suite = -5;
  EXPECT(wl_suite_parse("reilly", &suite) == WL_OK && suite == WL_SUITE_REILLY);
  EXPECT(wl_suite_parse("nope", &suite) == WL_INVALID_ARGUMENT);
  EXPECT(strcmp(wl_status_string(WL_NONCONVERGENCE), "NonConvergence") == 0);
  EXPECT(strcmp(wl_version(), "1.0.0") == 0);
}

static void warps(void) {
  wl_warp* w = NULL;
  double v[3];
  EXPECT(wl_warp_catalog("two-plus-cos", NULL, 0, &w) == WL_OK);
  if (w) {
    EXPECT(wl_warp_eval(w, M_PI / 2, v) == WL_OK);
    EXPECT(fabs(v[0] - 2) < 1e-15 && fabs(v[1] + 1) < 1e-15 && fabs(v[2]) < 1e-15);
    double h = 0;
    EXPECT(wl_warp_mean_curvature(w, M_PI / 2, &h) == WL_OK);
    EXPECT(fabs(h + 0.5) < 1e-15);
    wl_warp_free(w);
  }
  const double c = 3.0;
  EXPECT(wl_warp_catalog("constant", &c, 1, &w) == WL_OK);
  if (w) {
    EXPECT(wl_warp_eval(w, 1.7, v) == WL_OK);
    EXPECT(v[0] == 3.0 && v[1] == 0.0 && v[2] == 0.0);
    wl_warp_free(w);
  }
  EXPECT(wl_warp_catalog("no-such-warp", NULL, 0, &w) == WL_INVALID_ARGUMENT);
  EXPECT(wl_warp_expression("1 + t", 0.0, 0.0, 1.0, &w) == WL_OK);
  if (w) {
    EXPECT(wl_warp_eval(w, 2.0, v) == WL_DOMAIN_ERROR);
    wl_warp_free(w);
  }
  EXPECT(wl_warp_expression("t - 1", 0.0, 0.0, 1.0, &w) == WL_NONPOSITIVE_WARP);
}

int main(void) {
  run_bundled();
  errors();
  warps();
  if (failures) fprintf(stderr, "%d failures\n", failures);
  return failures ? 1 : 0;
}
