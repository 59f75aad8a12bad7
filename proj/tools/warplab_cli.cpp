// SPDX-License-Identifier: Apache-2.0
//
// warplab: scenario runner over the C interface.
//
// Exit codes: 0 every check passed, 1 a check failed, 2 usage, parse or
// scenario error, 3 numerical non-convergence.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "warplab/warplab.h"

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;
constexpr int kNonConvergence = 3;

struct Args {
  std::string scenario;
  std::string out;
  std::string csv;
  std::optional<std::uint64_t> seed;
  double tolerance_scale = 1.0;
  std::size_t nodes = 0;
  std::size_t refine = 0;
  bool quiet = false;
};

int error_exit(wl_status s) {
  std::cerr << "warplab: " << wl_status_string(s) << ": " << wl_last_error() << "\n";
  return s == WL_NONCONVERGENCE ? kNonConvergence : kUsage;
}

bool write_file(const std::string& path, const char* text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    std::cerr << "warplab: cannot write '" << path << "'\n";
    return false;
  }
  f << text;
  return static_cast<bool>(f);
}

void summarize(const wl_report* r, const char* name) {
  const std::size_t n = wl_report_check_count(r);
  for (std::size_t i = 0; i < n; ++i) {
    wl_check c;
    wl_report_check(r, i, &c);
    std::fprintf(stderr, "  %-4s %-48s residual %.3e  tol %.3e\n", c.verdict ? "ok" : "FAIL", c.id, c.residual,
                 c.tolerance);
  }
  std::fprintf(stderr, "%s: %zu checks, %s\n", name, n, wl_report_passed(r) ? "PASS" : "FAIL");
}

void print_table(const wl_report* r) {
  const std::size_t n = wl_report_check_count(r);
  for (std::size_t i = 0; i < n; ++i) {
    wl_check c;
    wl_report_check(r, i, &c);
    if (c.refinement_levels == 0) continue;
    std::printf("%s\n  %-12s %-22s %-12s %s\n", c.id, "resolution", "value", "error", "order");
    for (std::size_t k = 0; k < c.refinement_levels; ++k) {
      wl_refinement_entry e;
      wl_report_refinement(r, i, k, &e);
      std::printf("  %-12g %-22.15g %-12.4e ", e.resolution, e.value, e.error);
      if (std::isnan(e.order)) std::printf("-\n");
      else std::printf("%.3f\n", e.order);
    }
  }
}

// Loads, runs and reports one scenario. `table` prints refinement orders.
int execute(const Args& a, int suite, bool table) {
  wl_scenario* sc = nullptr;
  wl_status s = wl_scenario_load(a.scenario.c_str(), &sc);
  if (s != WL_OK) return error_exit(s);
  wl_run_options o;
  wl_run_options_init(&o);
  if (a.seed) {
    o.has_seed = 1;
    o.seed = *a.seed;
  }
  o.tolerance_scale = a.tolerance_scale;
  o.nodes = a.nodes;
  o.refine = a.refine;
  o.suite = suite;
  wl_report* r = nullptr;
  s = wl_run(sc, &o, &r);
  if (s != WL_OK) {
    wl_scenario_free(sc);
    return error_exit(s);
  }
  int code = wl_report_passed(r) ? kPass : kFail;
  if (table) print_table(r);
  if (!a.out.empty()) {
    if (!write_file(a.out, wl_report_json(r))) code = kUsage;
  } else if (!table) {
    std::fputs(wl_report_json(r), stdout);
  }
  if (!a.csv.empty() && !write_file(a.csv, table ? wl_report_refinement_csv(r) : wl_report_csv(r))) code = kUsage;
  if (!a.quiet) summarize(r, wl_scenario_name(sc));
  wl_report_free(r);
  wl_scenario_free(sc);
  return code;
}

void common(CLI::App* cmd, Args& a, bool refine) {
  cmd->add_option("--scenario", a.scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", a.out, "Write the JSON report here instead of stdout");
  cmd->add_option("--csv", a.csv, "Write a CSV table here");
  cmd->add_option("--seed", a.seed, "Override the scenario seed");
  cmd->add_option("--tolerance-scale", a.tolerance_scale, "Multiply every tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--quiet", a.quiet, "No per-check summary on stderr");
  if (refine) cmd->add_option("--refine", a.refine, "Refinement levels K >= 2")->check(CLI::Range(2, 12));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Warped product verification scenarios"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(wl_version()));

  Args a;
  CLI::App* run = app.add_subcommand("run", "Run every section of the scenario's suite");
  common(run, a, true);
  run->add_option("--nodes", a.nodes, "Quadrature nodes override")->check(CLI::Range(16, 1 << 22));

  CLI::App* t1 = app.add_subcommand("verify-theorem1", "Integral identity checks");
  common(t1, a, true);
  t1->add_option("--nodes", a.nodes, "Quadrature nodes override")->check(CLI::Range(16, 1 << 22));

  CLI::App* inter = app.add_subcommand("intersections", "Rotation hypersurface and intersection checks");
  common(inter, a, false);
  CLI::App* spec = app.add_subcommand("spectral", "Discrete spectra and eigenvalue upper bounds");
  common(spec, a, true);
  CLI::App* reilly = app.add_subcommand("reilly", "Reilly ledger and eigenvalue lower bounds");
  common(reilly, a, true);

  CLI::App* refine = app.add_subcommand("refine", "Convergence table with observed orders");
  refine->add_option("--scenario", a.scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  refine->add_option("K", a.refine, "Refinement levels K >= 2")->check(CLI::Range(2, 12));
  refine->add_option("--refine", a.refine, "Refinement levels K >= 2")->check(CLI::Range(2, 12));
  refine->add_option("--out", a.out, "Write the JSON report here");
  refine->add_option("--csv", a.csv, "Write the refinement CSV here");
  refine->add_option("--seed", a.seed, "Override the scenario seed");
  refine->add_option("--tolerance-scale", a.tolerance_scale, "Multiply every tolerance")
      ->check(CLI::PositiveNumber);
  refine->add_flag("--quiet", a.quiet, "No per-check summary on stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  if (*run) return execute(a, WL_SUITE_SCENARIO, false);
  if (*t1) return execute(a, WL_SUITE_THEOREM1, false);
  if (*inter) return execute(a, WL_SUITE_INTERSECTIONS, false);
  if (*spec) return execute(a, WL_SUITE_SPECTRAL, false);
  if (*reilly) return execute(a, WL_SUITE_REILLY, false);
  if (*refine) {
    if (a.refine == 0) a.refine = 3;
    return execute(a, WL_SUITE_SCENARIO, true);
  }
  return kUsage;
}
