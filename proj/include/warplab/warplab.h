/* SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the warplab verification library.
 *
 * Objects are opaque handles released with their matching *_free function.
 * Every fallible call returns a wl_status; on failure the message (and, for
 * parse errors, the 1-based line and column) is kept per thread and can be read
 * with wl_last_error*. Strings returned by accessors are owned by the handle
 * they came from and stay valid until it is freed.
 */
#ifndef WARPLAB_WARPLAB_H
#define WARPLAB_WARPLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define WL_API __declspec(dllexport)
#else
#define WL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wl_status {
  WL_OK = 0,
  WL_INVALID_ARGUMENT = 1,
  WL_DOMAIN_ERROR = 2,
  WL_NONPOSITIVE_WARP = 3,
  WL_HORIZON_ERROR = 4,
  WL_NONCONVERGENCE = 5,
  WL_TANGENCY_ERROR = 6,
  WL_DEGENERATE_TEST_FUNCTION = 7,
  WL_NONPOSITIVE_MEAN_CURVATURE = 8,
  WL_MISSING_SPECTRUM = 9,
  WL_PARSE_ERROR = 10,
  WL_IO_ERROR = 11,
  WL_INTERNAL_ERROR = 12
} wl_status;

typedef enum wl_suite {
  WL_SUITE_SCENARIO = -1, /* the suite named in the scenario */
  WL_SUITE_THEOREM1 = 0,
  WL_SUITE_INTERSECTIONS = 1,
  WL_SUITE_SPECTRAL = 2,
  WL_SUITE_REILLY = 3,
  WL_SUITE_ALL = 4
} wl_suite;

typedef struct wl_scenario wl_scenario;
typedef struct wl_report wl_report;
typedef struct wl_warp wl_warp;

typedef struct wl_run_options {
  int has_seed;           /* nonzero: seed overrides the scenario's */
  uint64_t seed;
  double tolerance_scale; /* multiplies every tolerance, > 0 */
  size_t nodes;           /* quadrature nodes override, 0 = scenario value */
  size_t refine;          /* refinement levels override (>= 2), 0 = scenario value */
  int suite;              /* a wl_suite value */
} wl_run_options;

typedef struct wl_check {
  const char* id;
  const char* anchor;
  const char* note;
  double lhs;
  double rhs;
  double residual;
  double tolerance;
  int verdict;
  size_t refinement_levels;
} wl_check;

typedef struct wl_refinement_entry {
  double resolution;
  double value;
  double error;
  double order; /* NaN on the first level */
} wl_refinement_entry;

WL_API const char* wl_version(void);
WL_API const char* wl_status_string(wl_status status);

WL_API const char* wl_last_error(void);
WL_API int wl_last_error_line(void);   /* 0 unless the last error was a parse error */
WL_API int wl_last_error_column(void);

WL_API void wl_run_options_init(wl_run_options* options);
WL_API wl_status wl_suite_parse(const char* name, int* suite);

WL_API wl_status wl_scenario_load(const char* path, wl_scenario** out);
WL_API wl_status wl_scenario_parse(const char* text, size_t length, wl_scenario** out);
WL_API const char* wl_scenario_name(const wl_scenario* scenario);
WL_API int wl_scenario_suite(const wl_scenario* scenario);
WL_API void wl_scenario_free(wl_scenario* scenario);

/* Runs every section of the selected suite in declaration order. */
WL_API wl_status wl_run(const wl_scenario* scenario, const wl_run_options* options, wl_report** out);

WL_API wl_status wl_report_from_json(const char* text, size_t length, wl_report** out);
WL_API int wl_report_passed(const wl_report* report);
WL_API size_t wl_report_check_count(const wl_report* report);
WL_API wl_status wl_report_check(const wl_report* report, size_t index, wl_check* out);
WL_API wl_status wl_report_refinement(const wl_report* report, size_t check, size_t level,
                                      wl_refinement_entry* out);
WL_API const char* wl_report_json(const wl_report* report);
WL_API const char* wl_report_csv(const wl_report* report);
WL_API const char* wl_report_refinement_csv(const wl_report* report);
WL_API void wl_report_free(wl_report* report);

/* Warping functions. Catalog names: constant, two-plus-cos, cosh, affine,
 * schwarzschild. period > 0 selects a circle domain [0, period); otherwise the
 * domain is the interval [a, b]. */
WL_API wl_status wl_warp_catalog(const char* name, const double* params, size_t count, wl_warp** out);
WL_API wl_status wl_warp_expression(const char* expression, double period, double a, double b,
                                    wl_warp** out);
/* out[0..2] = f, f', f''. */
WL_API wl_status wl_warp_eval(const wl_warp* warp, double t, double out[3]);
WL_API wl_status wl_warp_mean_curvature(const wl_warp* warp, double t, double* out);
WL_API void wl_warp_free(wl_warp* warp);

#ifdef __cplusplus
}
#endif

#endif /* WARPLAB_WARPLAB_H */
