// SPDX-License-Identifier: Apache-2.0
#include "report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "error.hpp"
#include "json.hpp"

namespace warplab {

using nlohmann::json;

namespace {

// JSON has no NaN or infinity; keep them as strings so reports round-trip.
json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double read_number(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    fail(ErrorCode::ParseError, "not a number: " + s);
  }
  return j.get<double>();
}

std::string shortest(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::vector<double> CheckRecord::orders() const {
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < history.size(); ++k)
    out.push_back(std::log2(history[k].error / history[k + 1].error));
  return out;
}

bool VerificationReport::passed() const {
  for (const CheckRecord& c : checks)
    if (!c.verdict) return false;
  return !checks.empty();
}

std::string VerificationReport::to_json() const {
  json j;
  j["scenario"] = scenario;
  j["suite"] = suite;
  j["passed"] = passed();
  j["provenance"] = {{"scenario_hash", provenance.scenario_hash},
                     {"seed", provenance.seed},
                     {"version", provenance.version},
                     {"tolerance_scale", number(provenance.tolerance_scale)}};
  json arr = json::array();
  for (const CheckRecord& c : checks) {
    json h = json::array();
    for (const RefinementEntry& e : c.history)
      h.push_back({{"resolution", number(e.resolution)}, {"value", number(e.value)}, {"error", number(e.error)}});
    json d = json::object();
    for (const auto& [k, v] : c.details) d[k] = number(v);
    json o = json::array();
    for (double p : c.orders()) o.push_back(number(p));
    arr.push_back({{"id", c.id},
                   {"anchor", c.anchor},
                   {"lhs", number(c.lhs)},
                   {"rhs", number(c.rhs)},
                   {"residual", number(c.residual)},
                   {"tolerance", number(c.tolerance)},
                   {"verdict", c.verdict},
                   {"refinement", h},
                   {"orders", o},
                   {"details", d},
                   {"note", c.note}});
  }
  j["checks"] = arr;
  return j.dump(2) + "\n";
}

VerificationReport VerificationReport::from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::ParseError, std::string("report: ") + e.what());
  }
  try {
    VerificationReport r;
    r.scenario = j.at("scenario").get<std::string>();
    r.suite = j.at("suite").get<std::string>();
    const json& p = j.at("provenance");
    r.provenance.scenario_hash = p.at("scenario_hash").get<std::string>();
    r.provenance.seed = p.at("seed").get<std::uint64_t>();
    r.provenance.version = p.at("version").get<std::string>();
    r.provenance.tolerance_scale = read_number(p.at("tolerance_scale"));
    for (const json& c : j.at("checks")) {
      CheckRecord rec;
      rec.id = c.at("id").get<std::string>();
      rec.anchor = c.at("anchor").get<std::string>();
      rec.lhs = read_number(c.at("lhs"));
      rec.rhs = read_number(c.at("rhs"));
      rec.residual = read_number(c.at("residual"));
      rec.tolerance = read_number(c.at("tolerance"));
      rec.verdict = c.at("verdict").get<bool>();
      for (const json& e : c.at("refinement"))
        rec.history.push_back({read_number(e.at("resolution")), read_number(e.at("value")), read_number(e.at("error"))});
      for (const auto& [k, v] : c.at("details").items()) rec.details[k] = read_number(v);
      rec.note = c.at("note").get<std::string>();
      r.checks.push_back(std::move(rec));
    }
    return r;
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, std::string("report: ") + e.what());
  }
}

std::string VerificationReport::to_csv() const {
  std::ostringstream out;
  out << "scenario,id,anchor,lhs,rhs,residual,tolerance,verdict\n";
  for (const CheckRecord& c : checks)
    out << csv_field(scenario) << ',' << csv_field(c.id) << ',' << csv_field(c.anchor) << ','
        << shortest(c.lhs) << ',' << shortest(c.rhs) << ',' << shortest(c.residual) << ','
        << shortest(c.tolerance) << ',' << (c.verdict ? "pass" : "fail") << '\n';
  return out.str();
}

std::string VerificationReport::refinement_csv() const {
  std::ostringstream out;
  out << "scenario,id,level,resolution,value,error,order\n";
  for (const CheckRecord& c : checks) {
    const std::vector<double> p = c.orders();
    for (std::size_t k = 0; k < c.history.size(); ++k) {
      const RefinementEntry& e = c.history[k];
      out << csv_field(scenario) << ',' << csv_field(c.id) << ',' << k << ',' << shortest(e.resolution) << ','
          << shortest(e.value) << ',' << shortest(e.error) << ',' << (k == 0 ? "" : shortest(p[k - 1])) << '\n';
    }
  }
  return out.str();
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hash_tag(std::string_view bytes) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

}  // namespace warplab
