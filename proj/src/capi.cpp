// SPDX-License-Identifier: Apache-2.0
#include "warplab/warplab.h"

#include <cmath>
#include <limits>
#include <new>
#include <string>

#include "error.hpp"
#include "report.hpp"
#include "scenario.hpp"
#include "warp.hpp"

struct wl_scenario {
  warplab::Scenario scenario;
};

struct wl_report {
  warplab::VerificationReport report;
  std::string json, csv, refinement_csv;
};

struct wl_warp {
  warplab::WarpingFunction warp;
};

namespace {

thread_local std::string g_error;
thread_local int g_line = 0;
thread_local int g_column = 0;

wl_status status_of(warplab::ErrorCode code) {
  using warplab::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return WL_INVALID_ARGUMENT;
    case ErrorCode::DomainError: return WL_DOMAIN_ERROR;
    case ErrorCode::NonPositiveWarp: return WL_NONPOSITIVE_WARP;
    case ErrorCode::HorizonError: return WL_HORIZON_ERROR;
    case ErrorCode::NonConvergence: return WL_NONCONVERGENCE;
    case ErrorCode::TangencyError: return WL_TANGENCY_ERROR;
    case ErrorCode::DegenerateTestFunction: return WL_DEGENERATE_TEST_FUNCTION;
    case ErrorCode::NonpositiveMeanCurvature: return WL_NONPOSITIVE_MEAN_CURVATURE;
    case ErrorCode::MissingSpectrum: return WL_MISSING_SPECTRUM;
    case ErrorCode::ParseError: return WL_PARSE_ERROR;
    case ErrorCode::IoError: return WL_IO_ERROR;
  }
  return WL_INTERNAL_ERROR;
}

wl_status set_error(wl_status s, std::string what, int line = 0, int column = 0) {
  g_error = std::move(what);
  g_line = line;
  g_column = column;
  return s;
}

template <class F>
wl_status guarded(F&& body) {
  g_error.clear();
  g_line = g_column = 0;
  try {
    body();
    return WL_OK;
  } catch (const warplab::ParseError& e) {
    return set_error(WL_PARSE_ERROR, e.what(), e.line(), e.column());
  } catch (const warplab::Error& e) {
    return set_error(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(WL_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return set_error(WL_INTERNAL_ERROR, e.what());
  }
}

#define WL_REQUIRE(cond, msg) \
  if (!(cond)) return set_error(WL_INVALID_ARGUMENT, msg)

}  // namespace

extern "C" {

const char* wl_version(void) { return warplab::kVersion; }

const char* wl_status_string(wl_status s) {
  switch (s) {
    case WL_OK: return "ok";
    case WL_INVALID_ARGUMENT: return "InvalidArgument";
    case WL_DOMAIN_ERROR: return "DomainError";
    case WL_NONPOSITIVE_WARP: return "NonPositiveWarp";
    case WL_HORIZON_ERROR: return "HorizonError";
    case WL_NONCONVERGENCE: return "NonConvergence";
    case WL_TANGENCY_ERROR: return "TangencyError";
    case WL_DEGENERATE_TEST_FUNCTION: return "DegenerateTestFunction";
    case WL_NONPOSITIVE_MEAN_CURVATURE: return "NonpositiveMeanCurvature";
    case WL_MISSING_SPECTRUM: return "MissingSpectrum";
    case WL_PARSE_ERROR: return "ParseError";
    case WL_IO_ERROR: return "IoError";
    case WL_INTERNAL_ERROR: return "InternalError";
  }
  return "unknown";
}

const char* wl_last_error(void) { return g_error.c_str(); }
int wl_last_error_line(void) { return g_line; }
int wl_last_error_column(void) { return g_column; }

void wl_run_options_init(wl_run_options* o) {
  if (!o) return;
  o->has_seed = 0;
  o->seed = 0;
  o->tolerance_scale = 1.0;
  o->nodes = 0;
  o->refine = 0;
  o->suite = WL_SUITE_SCENARIO;
}

wl_status wl_suite_parse(const char* name, int* suite) {
  WL_REQUIRE(name && suite, "null argument");
  return guarded([&] { *suite = static_cast<int>(warplab::parse_suite(name)); });
}

wl_status wl_scenario_load(const char* path, wl_scenario** out) {
  WL_REQUIRE(path && out, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new wl_scenario{warplab::Scenario::load_file(path)}; });
}

wl_status wl_scenario_parse(const char* text, size_t length, wl_scenario** out) {
  WL_REQUIRE(text && out, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new wl_scenario{warplab::Scenario::parse(std::string_view(text, length))}; });
}

const char* wl_scenario_name(const wl_scenario* s) { return s ? s->scenario.name().c_str() : ""; }

int wl_scenario_suite(const wl_scenario* s) { return s ? static_cast<int>(s->scenario.suite()) : WL_SUITE_ALL; }

void wl_scenario_free(wl_scenario* s) { delete s; }

wl_status wl_run(const wl_scenario* s, const wl_run_options* o, wl_report** out) {
  WL_REQUIRE(s && out, "null argument");
  *out = nullptr;
  wl_run_options defaults;
  wl_run_options_init(&defaults);
  if (!o) o = &defaults;
  WL_REQUIRE(o->suite >= WL_SUITE_SCENARIO && o->suite <= WL_SUITE_ALL, "suite out of range");
  return guarded([&] {
    warplab::RunOptions ro;
    if (o->has_seed) ro.seed = o->seed;
    ro.tolerance_scale = o->tolerance_scale;
    if (o->nodes) ro.nodes = o->nodes;
    if (o->refine) ro.refine = o->refine;
    if (o->suite != WL_SUITE_SCENARIO) ro.suite = static_cast<warplab::Suite>(o->suite);
    auto* r = new wl_report{warplab::run_scenario(s->scenario, ro), {}, {}, {}};
    *out = r;
  });
}

wl_status wl_report_from_json(const char* text, size_t length, wl_report** out) {
  WL_REQUIRE(text && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new wl_report{warplab::VerificationReport::from_json(std::string_view(text, length)), {}, {}, {}};
  });
}

int wl_report_passed(const wl_report* r) { return r && r->report.passed() ? 1 : 0; }

size_t wl_report_check_count(const wl_report* r) { return r ? r->report.checks.size() : 0; }

wl_status wl_report_check(const wl_report* r, size_t i, wl_check* out) {
  WL_REQUIRE(r && out, "null argument");
  WL_REQUIRE(i < r->report.checks.size(), "check index out of range");
  const warplab::CheckRecord& c = r->report.checks[i];
  out->id = c.id.c_str();
  out->anchor = c.anchor.c_str();
  out->note = c.note.c_str();
  out->lhs = c.lhs;
  out->rhs = c.rhs;
  out->residual = c.residual;
  out->tolerance = c.tolerance;
  out->verdict = c.verdict ? 1 : 0;
  out->refinement_levels = c.history.size();
  return WL_OK;
}

wl_status wl_report_refinement(const wl_report* r, size_t check, size_t level, wl_refinement_entry* out) {
  WL_REQUIRE(r && out, "null argument");
  WL_REQUIRE(check < r->report.checks.size(), "check index out of range");
  const warplab::CheckRecord& c = r->report.checks[check];
  WL_REQUIRE(level < c.history.size(), "refinement level out of range");
  out->resolution = c.history[level].resolution;
  out->value = c.history[level].value;
  out->error = c.history[level].error;
  out->order = level == 0 ? std::numeric_limits<double>::quiet_NaN() : c.orders()[level - 1];
  return WL_OK;
}

const char* wl_report_json(const wl_report* r) {
  if (!r) return "";
  auto* m = const_cast<wl_report*>(r);
  if (m->json.empty()) m->json = r->report.to_json();
  return m->json.c_str();
}

const char* wl_report_csv(const wl_report* r) {
  if (!r) return "";
  auto* m = const_cast<wl_report*>(r);
  if (m->csv.empty()) m->csv = r->report.to_csv();
  return m->csv.c_str();
}

const char* wl_report_refinement_csv(const wl_report* r) {
  if (!r) return "";
  auto* m = const_cast<wl_report*>(r);
  if (m->refinement_csv.empty()) m->refinement_csv = r->report.refinement_csv();
  return m->refinement_csv.c_str();
}

void wl_report_free(wl_report* r) { delete r; }

wl_status wl_warp_catalog(const char* name, const double* params, size_t count, wl_warp** out) {
  WL_REQUIRE(name && out && (params || count == 0), "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new wl_warp{warplab::WarpingFunction::catalog(name, std::span<const double>(params, count))};
  });
}

wl_status wl_warp_expression(const char* expression, double period, double a, double b, wl_warp** out) {
  WL_REQUIRE(expression && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    const warplab::Domain1D d = period > 0 ? warplab::Domain1D::circle(period) : warplab::Domain1D::interval(a, b);
    *out = new wl_warp{warplab::WarpingFunction::from_expression(expression, d)};
  });
}

wl_status wl_warp_eval(const wl_warp* w, double t, double out[3]) {
  WL_REQUIRE(w && out, "null argument");
  return guarded([&] {
    const warplab::WarpSample s = w->warp.eval(t);
    out[0] = s.f;
    out[1] = s.df;
    out[2] = s.d2f;
  });
}

wl_status wl_warp_mean_curvature(const wl_warp* w, double t, double* out) {
  WL_REQUIRE(w && out, "null argument");
  return guarded([&] { *out = w->warp.mean_curvature(t); });
}

void wl_warp_free(wl_warp* w) { delete w; }

}  // extern "C"
