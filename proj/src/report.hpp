// SPDX-License-Identifier: Apache-2.0
//
// Verification reports: one record per check, JSON and CSV serialization.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace warplab {

inline constexpr const char* kVersion = "1.0.0";

struct RefinementEntry {
  double resolution = 0.0;  // nodes, grid size or FD step
  double value = 0.0;
  double error = 0.0;
};

struct CheckRecord {
  std::string id;
  std::string anchor;  // stable identifier of the property being checked
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double tolerance = 0.0;
  bool verdict = false;
  std::vector<RefinementEntry> history;
  std::map<std::string, double> details;  // itemized terms
  std::string note;

  /// log2(e_k / e_{k+1}) over the history.
  std::vector<double> orders() const;
};

struct Provenance {
  std::string scenario_hash;  // "fnv1a64:<16 hex digits>"
  std::uint64_t seed = 0;
  std::string version = kVersion;
  double tolerance_scale = 1.0;
};

struct VerificationReport {
  std::string scenario;
  std::string suite;
  std::vector<CheckRecord> checks;
  Provenance provenance;

  bool passed() const;
  std::string to_json() const;
  static VerificationReport from_json(std::string_view text);
  /// One row per check.
  std::string to_csv() const;
  /// One row per refinement level, with observed orders.
  std::string refinement_csv() const;
};

std::uint64_t fnv1a64(std::string_view bytes);
std::string hash_tag(std::string_view bytes);

}  // namespace warplab
