// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <filesystem>
#include <limits>
#include <numbers>
#include <string>

#include "doctest.h"
#include "error.hpp"
#include "report.hpp"
#include "scenario.hpp"

using namespace warplab;

namespace {

constexpr double kPi = std::numbers::pi;

std::string bundled(const std::string& name) { return std::string(WARPLAB_SCENARIO_DIR) + "/" + name + ".json"; }

const CheckRecord& find(const VerificationReport& r, const std::string& id) {
  for (const CheckRecord& c : r.checks)
    if (c.id == id) return c;
  FAIL("missing check " << id);
  throw 0;
}

template <class F>
ParseError parse_error(F&& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("no ParseError raised");
  throw 0;
}

}  // namespace

TEST_CASE("malformed JSON reports line and column") {
  const std::string text = "{\n  \"name\": \"x\",\n  \"suite\": \"theorem1\"\n  \"warp\": {}\n}\n";
  const ParseError e = parse_error([&] { Scenario::parse(text); });
  // The parser stops at the end of the unexpected token "warp".
  CHECK(e.line() == 4);
  CHECK(e.column() >= 3);
  CHECK(e.column() <= 8);
}

TEST_CASE("schema errors point at the offending key") {
  SUBCASE("unknown field") {
    const ParseError e = parse_error([] {
      Scenario::parse("{\"name\": \"x\", \"suite\": \"theorem1\",\n\"theorem1\": {},\n  \"bogus\": 1}");
    });
    CHECK(e.line() == 3);
    CHECK(e.column() == 3);
  }
  SUBCASE("unknown suite") {
    const ParseError e = parse_error([] { Scenario::parse("{\"name\": \"x\",\n \"suite\": \"nope\"}"); });
    CHECK(e.line() == 2);
    CHECK(e.column() == 2);
  }
  SUBCASE("wrong type inside a section is reported when it runs") {
    const Scenario sc = Scenario::parse(
        "{\"name\": \"x\", \"suite\": \"theorem1\", \"warp\": {\"catalog\": \"two-plus-cos\"},\n"
        "\"fiber\": {\"kind\": \"sphere\", \"q\": 2},\n\"theorem1\": {\"nodes\": \"lots\"}}");
    const ParseError e = parse_error([&] { run_scenario(sc); });
    CHECK(e.line() == 3);
  }
  SUBCASE("bad constant expression") {
    const Scenario sc = Scenario::parse(
        "{\"name\": \"x\", \"suite\": \"spectral\",\n\"flat_torus\": {\"periods\": [\"2*\", 1]}}");
    const ParseError e = parse_error([&] { run_scenario(sc); });
    CHECK(e.line() == 2);
  }
  SUBCASE("bad warp expression is located in the file") {
    const Scenario sc = Scenario::parse(
        "{\"name\": \"x\", \"suite\": \"intersections\",\n\"warp\": {\"domain\": {\"interval\": [0, 1]},\n"
        "  \"expression\": \"2 + cos(t\"},\n\"principal\": {}}");
    const ParseError e = parse_error([&] { run_scenario(sc); });
    CHECK(e.line() == 3);
    CHECK(e.column() == 3);
  }
  SUBCASE("no sections for the suite") {
    CHECK_THROWS_AS(Scenario::parse("{\"name\": \"x\", \"suite\": \"reilly\", \"theorem1\": {}}"), ParseError);
  }
}

TEST_CASE("missing file is an IO error") {
  try {
    Scenario::load_file("/nonexistent/scenario.json");
    FAIL("expected IoError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IoError);
  }
}

TEST_CASE("constant expressions in numeric fields") {
  const Scenario sc = Scenario::load_file(bundled("two-plus-cos-q2"));
  const VerificationReport r = run_scenario(sc);
  CHECK(find(r, "theorem1.expected-value").rhs == doctest::Approx(8 * kPi * kPi).epsilon(1e-15));
}

TEST_CASE("clifford-product: both sides vanish") {
  const VerificationReport r = run_scenario(Scenario::load_file(bundled("clifford-product")));
  CHECK(r.passed());
  const CheckRecord& c = find(r, "theorem1.sides");
  CHECK(c.lhs == 0.0);
  CHECK(c.rhs == 0.0);
}

TEST_CASE("two-plus-cos-q2: both sides equal 8 pi^2") {
  // Independent oracle: 8 pi int_0^{2 pi} sin^2 by a composite midpoint sum.
  const int n = 20000;
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = 2 * kPi * (i + 0.5) / n;
    s += std::sin(t) * std::sin(t);
  }
  const double oracle = 8 * kPi * s * 2 * kPi / n;
  const VerificationReport r = run_scenario(Scenario::load_file(bundled("two-plus-cos-q2")));
  CHECK(r.passed());
  const CheckRecord& c = find(r, "theorem1.sides");
  CHECK(std::abs(c.lhs - oracle) / oracle <= 1e-6);
  CHECK(std::abs(c.rhs - oracle) / oracle <= 1e-6);
}

TEST_CASE("disc-reilly-cos2: ledger sides equal -8 pi within 2%") {
  const VerificationReport r = run_scenario(Scenario::load_file(bundled("disc-reilly-cos2")));
  CHECK(r.passed());
  const CheckRecord& c = find(r, "reilly.identity");
  CHECK(std::abs(c.lhs + 8 * kPi) / (8 * kPi) <= 0.02);
  CHECK(std::abs(c.rhs + 8 * kPi) / (8 * kPi) <= 0.02);
}

TEST_CASE("refinement orders") {
  RunOptions opts;
  opts.refine = 3;
  SUBCASE("circle eigenvalue: order 2") {
    const VerificationReport r = run_scenario(Scenario::load_file(bundled("circle-slice-rescale")), opts);
    const std::vector<double> p = find(r, "spectral.slice-rescale").orders();
    REQUIRE(p.size() == 2);
    for (double x : p) CHECK(x == doctest::Approx(2.0).epsilon(0.05));
  }
  SUBCASE("periodic quadrature: machine precision by the second refinement") {
    const VerificationReport r = run_scenario(Scenario::load_file(bundled("two-plus-cos-q2")), opts);
    const CheckRecord& c = find(r, "theorem1.sides");
    REQUIRE(c.history.size() == 3);
    CHECK(c.history[1].error <= 1e-13 * 8 * kPi * kPi);
  }
  SUBCASE("disc Dirichlet solve: order between 1.5 and 2") {
    const VerificationReport r = run_scenario(Scenario::load_file(bundled("disc-reilly-cos1")), opts);
    const std::vector<double> p = find(r, "reilly.harmonic-extension").orders();
    REQUIRE(p.size() == 2);
    for (double x : p) {
      CHECK(x >= 1.5);
      CHECK(x <= 2.05);
    }
  }
  SUBCASE("K < 2 is rejected") {
    opts.refine = 1;
    CHECK_THROWS_AS(run_scenario(Scenario::load_file(bundled("disc-reilly-cos1")), opts), Error);
  }
}

TEST_CASE("every bundled scenario passes") {
  namespace fs = std::filesystem;
  int count = 0;
  for (const auto& entry : fs::directory_iterator(WARPLAB_SCENARIO_DIR)) {
    if (entry.path().extension() != ".json") continue;
    const VerificationReport r = run_scenario(Scenario::load_file(entry.path().string()));
    INFO(entry.path().filename().string());
    CHECK(r.passed());
    for (const CheckRecord& c : r.checks) {
      INFO(c.id);
      CHECK(c.verdict == (c.residual <= c.tolerance));
      CHECK(!c.anchor.empty());
    }
    ++count;
  }
  CHECK(count >= 25);
}

TEST_CASE("reports are deterministic and round-trip") {
  const Scenario sc = Scenario::load_file(bundled("disc-reilly-cos1"));
  const std::string a = run_scenario(sc).to_json();
  const std::string b = run_scenario(sc).to_json();
  CHECK(a == b);
  CHECK(VerificationReport::from_json(a).to_json() == a);

  const Scenario spec = Scenario::load_file(bundled("theorem3-rotation-sphere"));
  const std::string c = run_scenario(spec).to_json();
  CHECK(c == run_scenario(spec).to_json());
  CHECK(VerificationReport::from_json(c).to_json() == c);
}

TEST_CASE("non-finite values round-trip") {
  VerificationReport r;
  r.scenario = "nf";
  r.suite = "all";
  CheckRecord c;
  c.id = "x";
  c.anchor = "y";
  c.lhs = std::numeric_limits<double>::quiet_NaN();
  c.rhs = std::numeric_limits<double>::infinity();
  c.residual = -std::numeric_limits<double>::infinity();
  c.history = {{16, 1.0, 0.0}, {32, 1.0, 0.0}};
  c.details["d"] = 0.1;
  r.checks.push_back(c);
  const std::string j = r.to_json();
  const VerificationReport back = VerificationReport::from_json(j);
  CHECK(std::isnan(back.checks[0].lhs));
  CHECK(back.checks[0].rhs == std::numeric_limits<double>::infinity());
  CHECK(back.checks[0].residual == -std::numeric_limits<double>::infinity());
  CHECK(back.to_json() == j);
  CHECK_THROWS_AS(VerificationReport::from_json("{\"scenario\": 1}"), Error);
  CHECK_THROWS_AS(VerificationReport::from_json("{"), Error);
}

TEST_CASE("overall pass requires every verdict") {
  VerificationReport r;
  CHECK_FALSE(r.passed());
  r.checks.push_back({});
  r.checks[0].verdict = true;
  CHECK(r.passed());
  r.checks.push_back({});
  CHECK_FALSE(r.passed());
}

TEST_CASE("provenance") {
  const Scenario sc = Scenario::load_file(bundled("two-plus-cos-q2"));
  RunOptions opts;
  opts.seed = 99;
  opts.tolerance_scale = 2.0;
  const VerificationReport r = run_scenario(sc, opts);
  CHECK(r.provenance.seed == 99);
  CHECK(r.provenance.tolerance_scale == 2.0);
  CHECK(r.provenance.version == std::string(kVersion));
  CHECK(r.provenance.scenario_hash == hash_tag(sc.text()));
  CHECK(find(r, "theorem1.sides").tolerance == doctest::Approx(2e-6));
  // The seed drives the random sample points, not the deterministic sides.
  const VerificationReport base = run_scenario(sc);
  CHECK(find(r, "theorem1.sides").lhs == find(base, "theorem1.sides").lhs);
  opts.tolerance_scale = 0.0;
  CHECK_THROWS_AS(run_scenario(sc, opts), Error);
}

TEST_CASE("FNV-1a reference values") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(hash_tag("a") == "fnv1a64:af63dc4c8601ec8c");
}

TEST_CASE("module errors carry scenario context") {
  try {
    run_scenario(Scenario::load_file(std::string(WARPLAB_TEST_DATA) + "/nonconvergent.json"));
    FAIL("expected NonConvergence");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonConvergence);
    CHECK(std::string(e.what()).find("nonconvergent") != std::string::npos);
    CHECK(std::string(e.what()).find("flat_torus") != std::string::npos);
  }
}

TEST_CASE("suite restriction") {
  const Scenario sc = Scenario::load_file(bundled("two-plus-cos-q2"));
  RunOptions opts;
  opts.suite = Suite::Reilly;
  CHECK_THROWS_AS(run_scenario(sc, opts), Error);
  opts.suite = Suite::All;
  CHECK(run_scenario(sc, opts).checks.size() == run_scenario(sc).checks.size());
}

TEST_CASE("CSV tables") {
  const VerificationReport r = run_scenario(Scenario::load_file(bundled("circle-slice-rescale")));
  const std::string csv = r.to_csv();
  CHECK(csv.rfind("scenario,id,anchor,lhs,rhs,residual,tolerance,verdict\n", 0) == 0);
  CHECK(csv.find("circle-slice-rescale,spectral.slice-rescale,") != std::string::npos);
  const std::string ref = r.refinement_csv();
  // Header plus one row per level.
  CHECK(std::count(ref.begin(), ref.end(), '\n') == 4);
}
