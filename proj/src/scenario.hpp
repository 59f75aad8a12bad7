// SPDX-License-Identifier: Apache-2.0
//
// JSON scenarios and the suites that turn them into verification reports.
//
// A scenario names a warp (catalog entry, expression, or a periodic field on
// a torus base), a fiber, and one section per family of checks. Numbers may be
// given as constant expressions such as "2*pi".
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "report.hpp"

namespace warplab {

enum class Suite { Theorem1, Intersections, Spectral, Reilly, All };

Suite parse_suite(std::string_view name);
const char* to_string(Suite s);

class Scenario {
 public:
  /// ParseError with line and column for malformed JSON or schema errors.
  static Scenario parse(std::string_view text);
  static Scenario load_file(const std::string& path);

  const std::string& name() const { return name_; }
  Suite suite() const { return suite_; }
  std::uint64_t seed() const { return seed_; }
  const std::string& text() const { return text_; }
  const nlohmann::ordered_json& root() const { return root_; }

  /// Sections present for a suite, in declaration order.
  std::vector<std::string> sections(Suite s) const;

 private:
  std::string name_;
  Suite suite_ = Suite::All;
  std::uint64_t seed_ = 1;
  std::string text_;
  nlohmann::ordered_json root_;
};

struct RunOptions {
  std::optional<std::uint64_t> seed;
  double tolerance_scale = 1.0;
  std::optional<std::size_t> nodes;   // overrides quadrature node counts
  std::optional<std::size_t> refine;  // refinement levels, >= 2
  std::optional<Suite> suite;         // restrict to one suite's sections
};

/// Runs the scenario's checks in declared order. Module errors are rethrown
/// with the scenario name and check id prepended.
VerificationReport run_scenario(const Scenario& scenario, const RunOptions& options = {});

}  // namespace warplab
