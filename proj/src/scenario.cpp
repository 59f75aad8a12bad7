// SPDX-License-Identifier: Apache-2.0
#include "scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "error.hpp"
#include "expr.hpp"
#include "geometry.hpp"
#include "integral_lab.hpp"
#include "intersection_lab.hpp"
#include "reilly.hpp"
#include "spectral_lab.hpp"

namespace warplab {

using Json = nlohmann::ordered_json;

namespace {

constexpr double kPi = std::numbers::pi;

const std::map<std::string, std::vector<std::string>>& suite_sections() {
  static const std::map<std::string, std::vector<std::string>> m{
      {"theorem1", {"theorem1", "log_warp", "window"}},
      {"intersections", {"rotation", "principal", "height", "parabolicity"}},
      {"spectral", {"slice_rescale", "flat_torus", "sphere_spectrum", "theorem3", "gradient_identity"}},
      {"reilly", {"reilly"}},
  };
  return m;
}

const std::vector<std::string> kTopLevel{"name", "suite", "seed", "warp", "base_field", "fiber", "tolerances",
                                         "eigensolver"};

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> t{
      {"theorem1", 1e-6},      {"equality", 1e-12},  {"degenerate", 1e-10}, {"log_warp", 1e-10},
      {"angle", 1e-8},         {"decomposition", 1e-6}, {"principal", 1e-6}, {"order", 0.3},
      {"slice_order", 0.2},    {"parabolicity", 1e-12}, {"mesh", 0.02},    {"green", 0.01},
      {"square", 1e-12},       {"witness", 0.01},    {"unit", 1e-10},      {"solver", 1e-10},
  };
  return t;
}

// 1-based line and column of a byte offset.
std::pair<int, int> position(std::string_view text, std::size_t offset) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(offset, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

// Schema access with positioned errors. The position is that of the first
// occurrence of the offending key in the source text.
class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  [[noreturn]] void error(const std::string& key, const std::string& what) const {
    const std::size_t at = key.empty() ? 0 : text_.find("\"" + key + "\"");
    const auto [line, col] = position(text_, at == std::string_view::npos ? 0 : at);
    throw ParseError("scenario: " + (key.empty() ? "" : "'" + key + "': ") + what, line, col);
  }

  double number(const Json& j, const std::string& key) const {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
      try {
        const Expression e = Expression::parse(j.get<std::string>(), {});
        return e.evaluate<double>(std::span<const double>());
      } catch (const Error& e) {
        error(key, std::string("bad constant expression: ") + e.what());
      }
    }
    error(key, "expected a number or a constant expression");
  }

  double num(const Json& obj, const std::string& key, std::optional<double> fallback = std::nullopt) const {
    if (!obj.contains(key)) {
      if (fallback) return *fallback;
      error(key, "missing required field");
    }
    return number(obj.at(key), key);
  }

  std::size_t count(const Json& obj, const std::string& key, std::size_t fallback, std::size_t minimum = 1) const {
    const double v = num(obj, key, static_cast<double>(fallback));
    if (v < static_cast<double>(minimum) || v != std::floor(v))
      error(key, "expected an integer >= " + std::to_string(minimum));
    return static_cast<std::size_t>(v);
  }

  std::string str(const Json& obj, const std::string& key, std::optional<std::string> fallback = std::nullopt) const {
    if (!obj.contains(key)) {
      if (fallback) return *fallback;
      error(key, "missing required field");
    }
    if (!obj.at(key).is_string()) error(key, "expected a string");
    return obj.at(key).get<std::string>();
  }

  bool flag(const Json& obj, const std::string& key, bool fallback) const {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_boolean()) error(key, "expected true or false");
    return obj.at(key).get<bool>();
  }

  std::vector<double> list(const Json& obj, const std::string& key, std::vector<double> fallback) const {
    if (!obj.contains(key)) return fallback;
    const Json& a = obj.at(key);
    if (!a.is_array()) error(key, "expected an array");
    std::vector<double> out;
    for (const Json& x : a) out.push_back(number(x, key));
    return out;
  }

  const Json& object(const Json& obj, const std::string& key) const {
    if (!obj.contains(key)) error(key, "missing required section");
    if (!obj.at(key).is_object()) error(key, "expected an object");
    return obj.at(key);
  }

  void keys(const Json& obj, const std::string& where, const std::vector<std::string>& allowed) const {
    for (const auto& [k, v] : obj.items())
      if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
        error(k, "unknown field in '" + where + "'");
  }

 private:
  std::string_view text_;
};

// ---------------------------------------------------------------------------
// Typed sections.

struct Model {
  std::optional<WarpingFunction> warp;
  std::optional<ScalarFieldM> field;
  FiberDescriptor fiber = FiberDescriptor::sphere(2);
  bool has_fiber = false;
};

Model build_model(const Reader& rd, const Json& root) {
  Model m;
  if (root.contains("warp")) {
    const Json& w = rd.object(root, "warp");
    rd.keys(w, "warp", {"catalog", "params", "expression", "domain", "name"});
    std::optional<Domain1D> domain;
    if (w.contains("domain")) {
      const Json& d = rd.object(w, "domain");
      rd.keys(d, "domain", {"circle", "interval"});
      if (d.contains("circle")) {
        domain = Domain1D::circle(rd.num(d, "circle"));
      } else {
        const std::vector<double> ab = rd.list(d, "interval", {});
        if (ab.size() != 2) rd.error("interval", "expected [a, b]");
        domain = Domain1D::interval(ab[0], ab[1]);
      }
    }
    if (w.contains("catalog")) {
      const std::vector<double> params = rd.list(w, "params", {});
      m.warp = WarpingFunction::catalog(rd.str(w, "catalog"), params, domain);
    } else {
      if (!domain) rd.error("expression", "an expression warp needs a domain");
      try {
        m.warp = WarpingFunction::from_expression(rd.str(w, "expression"), *domain, rd.str(w, "name", "expression"));
      } catch (const ParseError& e) {
        rd.error("expression", e.what());
      }
    }
  }
  if (root.contains("base_field")) {
    const Json& b = rd.object(root, "base_field");
    rd.keys(b, "base_field", {"expression", "periods"});
    try {
      m.field = ScalarFieldM::from_expression(rd.str(b, "expression"), rd.list(b, "periods", {}));
    } catch (const ParseError& e) {
      rd.error("expression", e.what());
    }
  }
  if (root.contains("fiber")) {
    const Json& f = rd.object(root, "fiber");
    rd.keys(f, "fiber", {"kind", "q", "radius", "volume", "spectrum"});
    const std::string kind = rd.str(f, "kind");
    const int q = static_cast<int>(rd.count(f, "q", 1));
    const double radius = rd.num(f, "radius", 1.0);
    if (kind == "sphere") {
      m.fiber = FiberDescriptor::sphere(q, radius);
    } else if (kind == "circle") {
      m.fiber = FiberDescriptor::circle(radius);
    } else if (kind == "abstract") {
      std::vector<std::pair<double, int>> spec;
      const std::vector<double> flat = rd.list(f, "spectrum", {});
      if (flat.size() % 2) rd.error("spectrum", "expected [lambda, multiplicity, ...] pairs");
      for (std::size_t k = 0; k < flat.size(); k += 2) spec.emplace_back(flat[k], static_cast<int>(flat[k + 1]));
      m.fiber = FiberDescriptor::abstract(q, rd.num(f, "volume"), spec);
    } else {
      rd.error("kind", "unknown fiber kind '" + kind + "'");
    }
    m.has_fiber = true;
  }
  return m;
}

const WarpingFunction& need_warp(const Reader& rd, const Model& m, const std::string& section) {
  if (!m.warp) rd.error(section, "section needs a 'warp'");
  return *m.warp;
}

// ---------------------------------------------------------------------------
// Running.

class Runner {
 public:
  Runner(const Scenario& sc, const RunOptions& opts, const Reader& rd, const Model& model)
      : sc_(sc), opts_(opts), rd_(rd), m_(model), seed_(opts.seed.value_or(sc.seed())) {
    tolerances_ = default_tolerances();
    if (sc.root().contains("tolerances")) {
      const Json& t = rd.object(sc.root(), "tolerances");
      for (const auto& [k, v] : t.items()) {
        if (!tolerances_.count(k)) rd.error(k, "unknown tolerance");
        const double x = rd.number(v, k);
        if (!(x > 0)) rd.error(k, "tolerances must be positive");
        tolerances_[k] = x;
      }
    }
    if (!(opts.tolerance_scale > 0)) fail(ErrorCode::InvalidArgument, "tolerance scale must be positive");
  }

  std::vector<CheckRecord> run(const std::string& section, const Json& j) {
    out_.clear();
    if (section == "theorem1") theorem1(j);
    else if (section == "log_warp") log_warp(j);
    else if (section == "window") window(j);
    else if (section == "rotation") rotation(j);
    else if (section == "principal") principal(j);
    else if (section == "height") height(j);
    else if (section == "parabolicity") parabolicity(j);
    else if (section == "slice_rescale") slice_rescale(j);
    else if (section == "flat_torus") flat_torus(j);
    else if (section == "sphere_spectrum") sphere_spectrum(j);
    else if (section == "theorem3") theorem3(j);
    else if (section == "gradient_identity") gradient_identity(j);
    else if (section == "reilly") reilly(j);
    return out_;
  }

  std::uint64_t seed() const { return seed_; }

 private:
  double tol(const std::string& key) const { return tolerances_.at(key) * opts_.tolerance_scale; }

  std::size_t levels(const Json& j, std::size_t fallback) const {
    if (opts_.refine) return *opts_.refine;
    return rd_.count(j, "levels", fallback, 1);
  }

  CheckRecord& add(std::string id, std::string anchor) {
    current_ = id;
    out_.push_back({});
    out_.back().id = std::move(id);
    out_.back().anchor = std::move(anchor);
    return out_.back();
  }

  static double relative(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

  static std::string label(double x) {
    std::ostringstream s;
    s << x;
    return s.str();
  }

  WarpedProductSpace space(const std::string& section) const {
    if (!m_.has_fiber) rd_.error(section, "section needs a 'fiber'");
    if (m_.field) return WarpedProductSpace(*m_.field, m_.fiber);
    return WarpedProductSpace(need_warp(rd_, m_, section), m_.fiber);
  }

  // -- theorem1 -------------------------------------------------------------

  void theorem1(const Json& j) {
    rd_.keys(j, "theorem1", {"nodes", "quadrature_tol", "levels", "expected", "expect_product"});
    const WarpedProductSpace sp = space("theorem1");
    const std::size_t nodes = opts_.nodes.value_or(rd_.count(j, "nodes", 512, kMinQuadratureNodes));
    const double qtol = rd_.num(j, "quadrature_tol", 1e-10);
    const InequalityReport r = theorem1_sides(sp, {nodes, qtol});

    CheckRecord& c = add("theorem1.sides", "warped-product.integral-identity");
    c.lhs = r.lhs;
    c.rhs = r.rhs;
    c.residual = relative(r.lhs, r.rhs);
    c.tolerance = tol("theorem1");
    c.verdict = c.residual <= c.tolerance;
    c.details = {{"nodes", static_cast<double>(r.nodes)}, {"warp_spread", r.warp_spread},
                 {"product_verdict", r.product_verdict ? 1.0 : 0.0}, {"degenerate", r.degenerate ? 1.0 : 0.0}};
    const std::size_t L = levels(j, 3);
    if (L >= 2) {
      const std::size_t start = std::max<std::size_t>(kMinQuadratureNodes, nodes >> (L - 1));
      // Error against the expected value when one is given, else the gap between the sides.
      const std::optional<double> target =
          j.contains("expected") ? std::optional<double>(rd_.num(j, "expected")) : std::nullopt;
      for (const SidesStep& s : theorem1_refinement(sp, start, static_cast<int>(L)))
        c.history.push_back({static_cast<double>(s.nodes), s.lhs,
                             target ? std::max(std::abs(s.lhs - *target), std::abs(s.rhs - *target))
                                    : std::abs(s.lhs - s.rhs)});
    }
    if (j.contains("expected")) {
      const double expected = rd_.num(j, "expected");
      CheckRecord& e = add("theorem1.expected-value", "warped-product.integral-identity");
      e.lhs = r.lhs;
      e.rhs = expected;
      e.residual = std::max(relative(r.lhs, expected), relative(r.rhs, expected));
      e.tolerance = tol("theorem1");
      e.verdict = e.residual <= e.tolerance;
    }
    if (r.degenerate) {
      CheckRecord& d = add("theorem1.degenerate-fiber", "warped-product.integral-identity.one-dimensional-fiber");
      d.lhs = r.lhs;
      d.rhs = r.rhs;
      d.residual = std::max(std::abs(r.lhs), std::abs(r.rhs));
      d.tolerance = tol("degenerate");
      d.verdict = r.degenerate && d.residual <= d.tolerance;
      d.note = "degenerate";
      return;
    }
    bool constant = m_.field ? false : sp.warp()->is_constant();
    constant = rd_.flag(j, "expect_product", constant);
    CheckRecord& e = add("theorem1.equality-case", "warped-product.integral-identity.equality");
    e.lhs = r.lhs;
    e.rhs = r.rhs;
    e.tolerance = tol("equality");
    if (constant) {
      e.residual = std::max(std::abs(r.lhs), std::abs(r.rhs));
      e.verdict = r.product_verdict && e.residual <= e.tolerance;
      e.note = "product expected";
    } else {
      e.verdict = !r.product_verdict && r.rhs > 0;
      e.residual = e.verdict ? 0.0 : 1.0;
      e.tolerance = 0.0;
      e.note = "proper warp expected";
    }
  }

  void log_warp(const Json& j) {
    rd_.keys(j, "log_warp", {"points"});
    const WarpedProductSpace sp = space("log_warp");
    const std::size_t points = rd_.count(j, "points", 100);
    std::mt19937_64 rng(seed_);
    const std::vector<double> lo = sp.base_lower(), len = sp.base_lengths();
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (std::size_t k = 0; k < points; ++k) {
      std::vector<double> x(lo.size());
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = lo[i] + len[i] * u(rng);
      worst = std::max(worst, log_warp_identity_residual(sp, x));
    }
    CheckRecord& c = add("theorem1.log-warp-pointwise", "warped-product.log-warp-identity");
    c.lhs = worst;
    c.residual = worst;
    c.tolerance = tol("log_warp");
    c.verdict = worst <= c.tolerance;
    c.details = {{"points", static_cast<double>(points)}};
  }

  void window(const Json& j) {
    rd_.keys(j, "window", {"a", "b", "nodes", "expected", "expect_negative"});
    const WarpingFunction& wf = need_warp(rd_, m_, "window");
    if (!m_.has_fiber) rd_.error("window", "section needs a 'fiber'");
    const double a = rd_.num(j, "a"), b = rd_.num(j, "b");
    const std::size_t nodes = opts_.nodes.value_or(rd_.count(j, "nodes", 512, kMinQuadratureNodes));
    const double value = noncompact_window_integral(wf, m_.fiber.q, m_.fiber.volume, a, b, {nodes, 1e-10});
    const double parts = window_by_parts(wf, m_.fiber.q, m_.fiber.volume, a, b, {nodes, 1e-10});
    if (rd_.flag(j, "expect_negative", !j.contains("expected"))) {
      CheckRecord& c = add("theorem1.window-sign", "warped-product.integral-identity.noncompact-window");
      c.lhs = value;
      c.rhs = parts;
      c.residual = std::max(0.0, value);
      c.tolerance = 0.0;
      c.verdict = value < 0.0;
      c.note = "a window of a noncompact base need not give a nonnegative integral";
      c.details = {{"a", a}, {"b", b}, {"boundary_term", value - parts}};
    }
    if (j.contains("expected")) {
      const double expected = rd_.num(j, "expected");
      CheckRecord& e = add("theorem1.window-value", "warped-product.integral-identity.noncompact-window");
      e.lhs = value;
      e.rhs = expected;
      e.residual = relative(value, expected);
      e.tolerance = tol("theorem1");
      e.verdict = e.residual <= e.tolerance;
    }
  }

  // -- intersections --------------------------------------------------------

  RotationHypersurface surface(const Json& j, const std::string& section) const {
    const int ambient = static_cast<int>(rd_.count(j, "ambient_dim", 3, 3));
    return RotationHypersurface::from_warp(need_warp(rd_, m_, section), ambient);
  }

  void rotation(const Json& j) {
    rd_.keys(j, "rotation", {"ambient_dim", "t0", "expected_angle", "cut", "fd_step"});
    const RotationHypersurface M = surface(j, "rotation");
    const std::vector<double> ts = rd_.list(j, "t0", {0.0});
    const std::vector<double> expected = rd_.list(j, "expected_angle", {});
    if (!expected.empty() && expected.size() != ts.size()) rd_.error("expected_angle", "one angle per t0");
    CuttingHypersurface N = CuttingHypersurface::hyperplane();
    if (j.contains("cut")) {
      const Json& cut = rd_.object(j, "cut");
      rd_.keys(cut, "cut", {"kind", "center"});
      const std::string kind = rd_.str(cut, "kind");
      if (kind == "sphere") N = CuttingHypersurface::sphere(rd_.num(cut, "center"));
      else if (kind != "hyperplane") rd_.error("kind", "cut is 'hyperplane' or 'sphere'");
    }
    const fd::Stencil st{rd_.num(j, "fd_step", 1e-3), true};
    for (std::size_t k = 0; k < ts.size(); ++k) {
      const double t0 = ts[k];
      const std::string at = "[t0=" + label(t0) + "]";
      const AngleReport a = intersection_angle(M, t0, 1e-8, st);
      CheckRecord& c = add("intersections.angle" + at, "intersection.angle");
      c.lhs = a.phi;
      c.rhs = expected.empty() ? a.fd_phi : expected[k];
      c.residual = std::max(std::abs(a.phi - c.rhs), std::abs(a.fd_phi - c.rhs));
      c.tolerance = tol("angle");
      c.verdict = c.residual <= c.tolerance;
      c.details = {{"closed_form", a.phi}, {"fd", a.fd_phi}};

      const IntersectionReport d = decomposition_check(M, N, t0, st);
      CheckRecord& e = add("intersections.decomposition" + at, "intersection.mean-curvature-decomposition");
      e.lhs = d.h_sigma_m;
      e.rhs = d.h_sigma_n * d.cos_phi + (d.sign >= 0 ? 1.0 : -1.0) * d.h_n * d.sin_phi;
      e.residual = std::max(d.decomposition_residual, d.vector_residual);
      e.tolerance = tol("decomposition");
      e.verdict = e.residual <= e.tolerance;
      e.details = {{"phi", d.phi},
                   {"h_sigma_n", d.h_sigma_n},
                   {"h_n", d.h_n},
                   {"sign", static_cast<double>(d.sign)},
                   {"closed_form_error", d.closed_form_error},
                   {"residual_plus", d.residual_plus},
                   {"residual_minus", d.residual_minus}};

      const SliceGeodesity g = slice_geodesity(M, t0, 1e-8, st);
      const bool flat = std::abs(M.warp()->eval(t0).df) <= 1e-8;
      const bool normal = std::abs(a.phi - kPi / 2) <= 1e-8;
      CheckRecord& n = add("intersections.normality" + at, "intersection.normality-criterion");
      n.lhs = g.embedded_norm;
      n.rhs = g.warped_norm;
      // The three characterizations of normality must agree.
      n.residual = (normal != g.verdict) + (normal != flat) + (normal != d.normal_verdict);
      n.tolerance = 0.0;
      n.verdict = n.residual == 0.0;
      n.details = {{"normal", normal ? 1.0 : 0.0}, {"cos_phi", std::cos(a.phi)}, {"slice_totally_geodesic", g.verdict ? 1.0 : 0.0},
                   {"critical_point", flat ? 1.0 : 0.0}};
    }
  }

  void principal(const Json& j) {
    rd_.keys(j, "principal", {"ambient_dim", "points"});
    const RotationHypersurface M = surface(j, "principal");
    const std::size_t points = rd_.count(j, "points", 50);
    std::mt19937_64 rng(seed_);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> g;
    const Domain1D& dom = M.warp()->domain();
    double worst = 0.0, tangency = 0.0;
    for (std::size_t k = 0; k < points; ++k) {
      const double t = dom.lower() + dom.length() * u(rng);
      fd::Vec Phi(M.n());
      for (int i = 0; i < Phi.size(); ++i) Phi[i] = g(rng);
      Phi.normalize();
      const PrincipalCheck c = principal_curvature_check(M, M.arclength(t), Phi);
      worst = std::max(worst, c.max_error);
      tangency = std::max(tangency, c.tangency_residual);
    }
    CheckRecord& c = add("intersections.principal-curvatures", "rotation-hypersurface.principal-curvatures");
    c.lhs = worst;
    c.residual = worst;
    c.tolerance = tol("principal");
    c.verdict = worst <= c.tolerance && tangency <= 1e-10;
    c.details = {{"points", static_cast<double>(points)}, {"tangency_residual", tangency}};
  }

  void height(const Json& j) {
    rd_.keys(j, "height", {"curves", "length"});
    const WarpingFunction& wf = need_warp(rd_, m_, "height");
    const std::size_t curves = rd_.count(j, "curves", 20);
    const double length = rd_.num(j, "length", 2.0);
    double worst = 0.0, min_order = 1e300, max_order = -1e300;
    HeightLaplacianReport worst_report;
    for (std::size_t k = 0; k < curves; ++k) {
      const HeightLaplacianReport r = height_laplacian_check(CurveInWarpedSurface::random(wf, seed_ + k, length));
      for (double p : r.orders) {
        min_order = std::min(min_order, p);
        max_order = std::max(max_order, p);
        if (std::abs(p - 2.0) >= worst) {
          worst = std::abs(p - 2.0);
          worst_report = r;
        }
      }
    }
    CheckRecord& c = add("intersections.height-lemma", "height-function.laplacian");
    c.lhs = min_order;
    c.rhs = 2.0;
    c.residual = worst;
    c.tolerance = tol("order");
    c.verdict = worst <= c.tolerance;
    c.details = {{"curves", static_cast<double>(curves)}, {"min_order", min_order}, {"max_order", max_order}};
    for (const HeightResidual& s : worst_report.steps) c.history.push_back({s.h, s.max_residual, s.max_residual});
  }

  void parabolicity(const Json& j) {
    rd_.keys(j, "parabolicity", {"dims", "samples", "radius"});
    const std::vector<double> dims = rd_.list(j, "dims", {3, 4, 5});
    const std::size_t samples = rd_.count(j, "samples", 10000);
    const double radius = rd_.num(j, "radius", 10.0);
    for (double n : dims) {
      const double worst = parabolicity_witness(static_cast<int>(n), samples, seed_, radius);
      CheckRecord& c = add("intersections.parabolicity[n=" + label(n) + "]", "parabolicity.subharmonic-witness");
      c.lhs = worst;
      c.residual = std::max(0.0, worst);
      c.tolerance = tol("parabolicity");
      c.verdict = worst <= c.tolerance;
      c.details = {{"samples", static_cast<double>(samples)}, {"laplacian_at_origin", witness_laplacian(static_cast<int>(n), 0.0)}};
    }
  }

  // -- spectral -------------------------------------------------------------

  EigenOptions eigen() const {
    EigenOptions e;
    e.seed = seed_;
    if (sc_.root().contains("eigensolver")) {
      const Json& j = rd_.object(sc_.root(), "eigensolver");
      rd_.keys(j, "eigensolver", {"tol", "krylov", "max_doublings", "shift"});
      e.tol = rd_.num(j, "tol", e.tol);
      e.krylov = rd_.count(j, "krylov", e.krylov, 2);
      e.max_doublings = rd_.count(j, "max_doublings", e.max_doublings, 0);
      e.shift = rd_.num(j, "shift", e.shift);
      if (!(e.tol > 0) || !(e.shift > 0)) rd_.error("eigensolver", "tol and shift must be positive");
    }
    return e;
  }

  void slice_rescale(const Json& j) {
    rd_.keys(j, "slice_rescale", {"t", "nodes", "levels"});
    const WarpingFunction& wf = need_warp(rd_, m_, "slice_rescale");
    if (!m_.has_fiber) rd_.error("slice_rescale", "section needs a 'fiber'");
    const double t = rd_.num(j, "t", 0.0);
    const std::size_t n0 = rd_.count(j, "nodes", 32, 8);
    const std::size_t L = levels(j, 3);
    const auto target = slice_spectrum(m_.fiber, wf, t, 1).front();
    const double f = wf.eval(t).f;
    CheckRecord& c = add("spectral.slice-rescale", "slice.laplacian-rescaling");
    double gap = 0.0;
    for (std::size_t k = 0; k < L; ++k) {
      const std::size_t n = n0 << k;
      DiscreteLaplacian mesh = [&] {
        if (m_.fiber.kind == FiberDescriptor::Kind::Circle)
          return DiscreteLaplacian::circle(f * m_.fiber.radius, n);
        if (m_.fiber.kind == FiberDescriptor::Kind::Sphere && m_.fiber.q == 2)
          return DiscreteLaplacian::revolution(RevolutionProfile::sphere(f * m_.fiber.radius), n / 2, n,
                                               EdgeKind::Pole, EdgeKind::Pole);
        rd_.error("fiber", "slice meshes exist for circle and 2-sphere fibers");
      }();
      const std::vector<Eigenpair> p = lowest_eigenpairs(mesh, static_cast<std::size_t>(target.second), eigen());
      c.history.push_back({static_cast<double>(n), p.front().lambda, std::abs(p.front().lambda - target.first)});
      gap = std::max(gap, (p.back().lambda - p.front().lambda) / p.front().lambda);
    }
    c.lhs = c.history.back().value;
    c.rhs = target.first;
    const std::vector<double> orders = c.orders();
    c.residual = 0.0;
    for (double p : orders) c.residual = std::max(c.residual, std::abs(p - 2.0));
    c.tolerance = tol("slice_order");
    c.verdict = !orders.empty() && c.residual <= c.tolerance;
    c.details = {{"t", t}, {"f", f}, {"multiplicity", static_cast<double>(target.second)},
                 {"multiplicity_spread", gap}};
    if (orders.empty()) c.note = "needs at least two levels";
  }

  void flat_torus(const Json& j) {
    rd_.keys(j, "flat_torus", {"periods", "nodes"});
    const std::vector<double> L = rd_.list(j, "periods", {});
    const std::vector<double> n = rd_.list(j, "nodes", {64, 64});
    if (L.size() != 2 || n.size() != 2) rd_.error("periods", "expected two periods and two node counts");
    const std::vector<Eigenpair> p = lowest_eigenpairs(
        DiscreteLaplacian::flat_torus(L[0], L[1], static_cast<std::size_t>(n[0]), static_cast<std::size_t>(n[1])), 1,
        eigen());
    const double exact = std::pow(2 * kPi / std::max(L[0], L[1]), 2);
    CheckRecord& c = add("spectral.flat-torus", "spectrum.flat-torus");
    c.lhs = p.front().lambda;
    c.rhs = exact;
    c.residual = std::abs(c.lhs - exact) / exact;
    c.tolerance = tol("mesh");
    c.verdict = c.residual <= c.tolerance && p.front().residual <= 1e-8 * std::max(1.0, c.lhs);
    c.details = {{"eigen_residual", p.front().residual}};
  }

  void sphere_spectrum(const Json& j) {
    rd_.keys(j, "sphere_spectrum", {"radius", "rings"});
    const double R = rd_.num(j, "radius", 1.0);
    const std::size_t ns = rd_.count(j, "rings", 32, 4);
    const std::vector<Eigenpair> p = lowest_eigenpairs(
        DiscreteLaplacian::revolution(RevolutionProfile::sphere(R), ns, 2 * ns, EdgeKind::Pole, EdgeKind::Pole), 3,
        eigen());
    const double exact = 2.0 / (R * R);
    CheckRecord& c = add("spectral.sphere-lambda1", "spectrum.round-sphere");
    c.lhs = p.front().lambda;
    c.rhs = exact;
    c.residual = 0.0;
    for (const Eigenpair& e : p) c.residual = std::max(c.residual, std::abs(e.lambda - exact) / exact);
    c.tolerance = tol("mesh");
    c.verdict = c.residual <= c.tolerance;
  }

  void theorem3(const Json& j) {
    rd_.keys(j, "theorem3", {"cut", "center", "radius", "t0", "rings", "angles", "mollify", "expect_error"});
    Theorem3Config cfg{need_warp(rd_, m_, "theorem3")};
    const std::string cut = rd_.str(j, "cut", "sphere");
    if (cut == "plane") {
      cfg.cut = Theorem3Config::Cut::Plane;
      cfg.plane_t = rd_.num(j, "t0");
    } else if (cut == "sphere") {
      cfg.center = rd_.num(j, "center", 0.0);
      cfg.radius = rd_.num(j, "radius");
    } else {
      rd_.error("cut", "cut is 'sphere' or 'plane'");
    }
    cfg.ns = rd_.count(j, "rings", 64, 4);
    cfg.nbeta = rd_.count(j, "angles", 128, 4);
    cfg.mollify = rd_.num(j, "mollify", 0.0);
    cfg.eigen = eigen();
    if (j.contains("expect_error")) {
      const std::string want = rd_.str(j, "expect_error");
      CheckRecord& c = add("spectral.theorem3-guard", "first-eigenvalue.upper-bound.test-function");
      try {
        theorem3_bound(cfg);
        c.note = "no error raised";
        c.verdict = false;
      } catch (const Error& e) {
        c.note = to_string(e.code());
        c.verdict = want == to_string(e.code());
      }
      return;
    }
    const Theorem3Report r = theorem3_bound(cfg);
    CheckRecord& c = add("spectral.theorem3-bound", "first-eigenvalue.upper-bound");
    c.lhs = r.bound;
    c.rhs = r.lambda1;
    c.residual = std::max(0.0, -r.margin) / r.lambda1;
    c.tolerance = tol("mesh");
    c.verdict = c.residual <= c.tolerance;
    c.details = {{"margin", r.margin},{"shape_term", r.shape_term},     {"curvature_term", r.curvature_term},
                 {"denominator", r.denominator},   {"lambda1_exact", r.lambda1_exact},
                 {"parallels", static_cast<double>(r.field.samples.size())}};
    CheckRecord& a = add("spectral.theorem3-angle-field", "first-eigenvalue.upper-bound.angle-field");
    a.lhs = r.field.unit_residual;
    a.residual = r.field.unit_residual;
    a.tolerance = tol("unit");
    a.verdict = a.residual <= a.tolerance;
    CheckRecord& q = add("spectral.theorem3-rayleigh", "first-eigenvalue.rayleigh-quotient");
    q.lhs = r.centered_lhs;
    q.rhs = r.centered_rhs;
    q.residual = std::max(0.0, std::max(r.centered_lhs - r.centered_rhs, r.rayleigh_lhs - r.rayleigh_rhs)) /
                 std::max(1.0, r.rayleigh_rhs);
    q.tolerance = 1e-12;
    q.verdict = r.rayleigh_ok;
    q.details = {{"raw_lhs", r.rayleigh_lhs}, {"raw_rhs", r.rayleigh_rhs}};
  }

  void gradient_identity(const Json& j) {
    rd_.keys(j, "gradient_identity", {"curve", "window", "samples", "steps"});
    GradientIdentityConfig cfg{need_warp(rd_, m_, "gradient_identity")};
    cfg.curve = rd_.str(j, "curve", cfg.curve);
    const std::vector<double> w = rd_.list(j, "window", {cfg.t_lo, cfg.t_hi});
    if (w.size() != 2) rd_.error("window", "expected [t_lo, t_hi]");
    cfg.t_lo = w[0];
    cfg.t_hi = w[1];
    cfg.samples = rd_.count(j, "samples", 64);
    cfg.steps = rd_.list(j, "steps", cfg.steps);
    GradientIdentityReport r;
    try {
      r = gradient_identity_check(cfg);
    } catch (const ParseError& e) {
      rd_.error("curve", e.what());
    }
    CheckRecord& c = add("spectral.gradient-identity", "first-eigenvalue.cos-gradient-identity");
    for (std::size_t k = 0; k < r.steps.size(); ++k) c.history.push_back({r.steps[k], r.residuals[k], r.residuals[k]});
    c.lhs = r.residuals.back();
    const bool exact = r.residuals.front() <= 1e-13;
    bool decreasing = true;
    for (std::size_t k = 0; k + 1 < r.residuals.size(); ++k) decreasing &= r.residuals[k + 1] < r.residuals[k];
    double min_order = 1e300;
    for (double p : r.orders) min_order = std::min(min_order, p);
    // Residual is the shortfall of the observed order below first order.
    c.residual = exact ? 0.0 : decreasing ? std::max(0.0, 1.0 - min_order) : 1.0;
    c.tolerance = 0.0;
    c.verdict = c.residual <= c.tolerance;
    c.details = {{"max_cos", r.max_cos}, {"finest_residual", r.residuals.back()}};
    if (exact) c.note = "identity holds to rounding";
  }

  // -- reilly ---------------------------------------------------------------

  void reilly(const Json& j) {
    rd_.keys(j, "reilly", {"domain", "boundary", "lambda", "mesh", "levels", "expected"});
    const Json& dom = rd_.object(j, "domain");
    rd_.keys(dom, "domain", {"kind", "radius", "length", "window"});
    DirichletProblem p;
    const std::string kind = rd_.str(dom, "kind");
    std::function<double(double, double)> exact;  // closed-form harmonic extension, when known
    if (kind == "disc") {
      p.profile = RevolutionProfile::disc(rd_.num(dom, "radius", 1.0));
      p.inner = EdgeKind::Pole;
    } else if (kind == "cylinder") {
      p.profile = RevolutionProfile::cylinder(rd_.num(dom, "length"), rd_.num(dom, "radius", 1.0));
      p.inner = EdgeKind::Neumann;
    } else if (kind == "warp-sheet") {
      const std::vector<double> w = rd_.list(dom, "window", {});
      if (w.size() != 2) rd_.error("window", "expected [t0, t1]");
      p.profile = RevolutionProfile::from_warp(need_warp(rd_, m_, "reilly"), w[0], w[1]);
      p.inner = EdgeKind::Neumann;
    } else {
      rd_.error("kind", "domain is 'disc', 'cylinder' or 'warp-sheet'");
    }
    const Json& b = rd_.object(j, "boundary");
    rd_.keys(b, "boundary", {"mode", "constant"});
    double lambda;
    if (b.contains("constant")) {
      const double c0 = rd_.num(b, "constant");
      p.boundary = [c0](double) { return c0; };
      exact = [c0](double, double) { return c0; };
      lambda = 0.0;
    } else {
      const double k = static_cast<double>(rd_.count(b, "mode", 1));
      p.boundary = [k](double beta) { return std::cos(k * beta); };
      lambda = k * k;
      const double R = p.profile.s1;
      if (kind == "disc") exact = [k, R](double s, double beta) { return std::pow(s / R, k) * std::cos(k * beta); };
    }
    lambda = rd_.num(j, "lambda", lambda);
    const std::vector<double> mesh = rd_.list(j, "mesh", {64, 64});
    if (mesh.size() != 2 || mesh[0] < 4 || mesh[1] < 8) rd_.error("mesh", "expected [rings >= 4, angles >= 8]");
    p.ns = static_cast<std::size_t>(mesh[0]);
    p.nbeta = static_cast<std::size_t>(mesh[1]);
    const std::size_t L = levels(j, 3);
    const Json expected = j.contains("expected") ? rd_.object(j, "expected") : Json::object();
    rd_.keys(expected, "expected", {"lhs", "theorem4_bound", "kappa_lhs"});

    std::vector<ReillyLedger> ledgers;
    std::vector<RefinementEntry> solve_history;
    std::optional<HarmonicSolution> finest;
    bool max_principle = true;
    double solver = 0.0;
    for (std::size_t k = 0; k < L; ++k) {
      DirichletProblem pk = p;
      pk.ns = p.ns << k;
      pk.nbeta = p.nbeta << k;
      HarmonicSolution s = harmonic_extension(pk);
      max_principle &= s.maximum_principle;
      solver = std::max(solver, s.relative_residual);
      if (exact) {
        const Vector ref = s.mesh.sample(exact);
        solve_history.push_back({static_cast<double>(pk.ns), s.u.norm(), (s.u - ref).cwiseAbs().maxCoeff()});
      }
      ledgers.push_back(reilly_ledger(s));
      if (k + 1 == L) finest = std::move(s);
    }
    const ReillyLedger& led = ledgers.back();

    CheckRecord& h = add("reilly.harmonic-extension", "reilly.dirichlet-problem");
    h.lhs = solver;
    h.residual = solver;
    h.tolerance = tol("solver");
    h.history = solve_history;
    bool order_ok = true;
    for (double o : h.orders())
      if (solve_history.front().error > 1e-12) order_ok &= o >= 1.5;
    h.verdict = max_principle && solver <= h.tolerance && order_ok;
    h.details = {{"maximum_principle", max_principle ? 1.0 : 0.0}, {"iterations", static_cast<double>(finest->iterations)}};
    if (!solve_history.empty()) h.details["max_nodal_error"] = solve_history.back().error;

    CheckRecord& r = add("reilly.identity", "reilly.formula");
    r.lhs = led.lhs;
    r.rhs = led.rhs;
    r.residual = led.residual;
    r.tolerance = tol("mesh");
    bool monotone = true;
    for (std::size_t k = 0; k + 1 < ledgers.size(); ++k) monotone &= ledgers[k + 1].residual < ledgers[k].residual;
    const bool trivial = std::max(std::abs(led.lhs), std::abs(led.rhs)) <= 1e-10;
    r.verdict = r.residual <= r.tolerance && (monotone || trivial);
    for (const ReillyLedger& l : ledgers)
      r.history.push_back({static_cast<double>(l.ns), l.lhs, std::abs(l.lhs - l.rhs)});
    r.details = {{"laplacian_sq", led.laplacian_sq},
                 {"hessian_sq", led.hessian_sq},
                 {"ricci", led.ricci},
                 {"outer_mean_curvature", led.outer.mean_curvature},
                 {"outer_h_term", led.outer.h_term},
                 {"outer_laplacian_term", led.outer.laplacian_term},
                 {"outer_second_form_term", led.outer.second_form_term},
                 {"inner_h_term", led.inner.h_term},
                 {"inner_laplacian_term", led.inner.laplacian_term},
                 {"inner_second_form_term", led.inner.second_form_term},
                 {"kappa", led.kappa},
                 {"nonpositive_mean_curvature", led.nonpositive_mean_curvature ? 1.0 : 0.0}};
    if (!monotone && !trivial) r.note = "refinement history is not monotone";
    if (expected.contains("lhs")) {
      const double want = rd_.num(expected, "lhs");
      CheckRecord& e = add("reilly.expected-lhs", "reilly.formula");
      e.lhs = led.lhs;
      e.rhs = want;
      e.residual = std::max(std::abs(led.lhs - want), std::abs(led.rhs - want)) / std::max(1.0, std::abs(want));
      e.tolerance = tol("mesh");
      e.verdict = e.residual <= e.tolerance;
    }

    const BoundaryData bd = boundary_data(*finest);
    if (kind == "warp-sheet") {
      const MeanCurvatureSigns signs = mean_curvature_signs(*m_.warp);
      CheckRecord& s = add("reilly.mean-curvature-positive", "slice.mean-curvature-sign");
      s.lhs = signs.min_h;
      s.residual = signs.positive ? 0.0 : 1.0;
      s.tolerance = 0.0;
      s.verdict = signs.positive;
      s.details = {{"min_h", signs.min_h}, {"min_h_prime", signs.min_hprime},
                   {"integration_error", m_.warp->integration_error_estimate()}};
    }
    if (led.nonpositive_mean_curvature) {
      CheckRecord& f = add("reilly.mean-curvature-flag", "eigenvalue-lower-bound.hypothesis");
      f.lhs = bd.H;
      f.verdict = true;
      f.note = "NonpositiveMeanCurvature: the lower bound does not apply; the ledger is still checked";
    } else {
      const Theorem4Report t4 = theorem4_bound(*finest, lambda);
      CheckRecord& t = add("reilly.lower-bound", "eigenvalue-lower-bound");
      t.lhs = t4.lambda_sq;
      t.rhs = t4.lower_bound;
      t.residual = std::max(0.0, -t4.margin) / std::max(1.0, t4.lambda_sq);
      t.tolerance = tol("mesh");
      t.verdict = t.residual <= t.tolerance;
      t.details = {{"margin", t4.margin},{"ricci_term", t4.ricci_term}, {"boundary_term", t4.boundary_term},
                   {"denominator", t4.denominator}, {"lambda", lambda}, {"f", bd.f}, {"H", bd.H}};
      if (expected.contains("theorem4_bound")) {
        const double want = rd_.num(expected, "theorem4_bound");
        CheckRecord& e = add("reilly.lower-bound-value", "eigenvalue-lower-bound");
        e.lhs = t4.lower_bound;
        e.rhs = want;
        e.residual = relative(t4.lower_bound, want);
        e.tolerance = tol("witness");
        e.verdict = e.residual <= e.tolerance;
      }
      const double sq = square_completion_check(*finest, lambda);
      CheckRecord& s = add("reilly.square-completion", "eigenvalue-lower-bound.square-completion");
      s.lhs = sq;
      s.residual = std::max(0.0, -sq);
      s.tolerance = tol("square");
      s.verdict = sq >= -s.tolerance;
    }

    const KappaReport kr = kappa_bound_check(*finest, lambda);
    CheckRecord& k = add("reilly.kappa-bound", "second-form.kappa-bound");
    k.lhs = kr.lhs;
    k.rhs = kr.rhs;
    k.residual = std::max(0.0, kr.rhs - kr.lhs) / (std::abs(kr.rhs) > 1e-12 ? std::abs(kr.rhs) : 1.0);
    k.tolerance = tol("green");
    k.verdict = k.residual <= k.tolerance;
    k.details = {{"kappa", kr.kappa}, {"margin", kr.lhs - kr.rhs}};
    if (expected.contains("kappa_lhs")) {
      const double want = rd_.num(expected, "kappa_lhs");
      CheckRecord& e = add("reilly.kappa-value", "second-form.kappa-bound");
      e.lhs = kr.lhs;
      e.rhs = kr.rhs;
      e.residual = std::max(relative(kr.lhs, want), relative(kr.rhs, want));
      e.tolerance = tol("green");
      e.verdict = e.residual <= e.tolerance;
    }
    // Absolute floor for harmonic data with no energy (u constant): the flux is
    // then a difference quotient of solver roundoff.
    double boundary_mass = 0.0;
    for (double v : bd.f0) boundary_mass += v * v * bd.dl;
    const double floor = 1e-8 * std::max(1.0, boundary_mass);
    CheckRecord& g = add("reilly.green-identity", "second-form.green-identity");
    g.lhs = kr.energy;
    g.rhs = kr.flux;
    const bool quiet = std::max(std::abs(kr.energy), std::abs(kr.flux)) <= floor;
    g.residual = quiet ? 0.0 : kr.green_residual;
    g.tolerance = tol("green");
    g.verdict = g.residual <= g.tolerance;
    if (quiet) g.note = "no Dirichlet energy; both sides below the roundoff floor";
    CheckRecord& d = add("reilly.slice-energy", "slice.laplacian-rescaling");
    d.lhs = kr.slice_energy;
    d.rhs = kr.slice_eigen;
    d.residual = std::max(std::abs(kr.slice_energy), std::abs(kr.slice_eigen)) <= floor ? 0.0 : kr.energy_residual;
    d.tolerance = tol("green");
    d.verdict = d.residual <= d.tolerance;
  }

 public:
  std::string current_;

 private:
  const Scenario& sc_;
  const RunOptions& opts_;
  const Reader& rd_;
  const Model& m_;
  std::uint64_t seed_;
  std::map<std::string, double> tolerances_;
  std::vector<CheckRecord> out_;
};

void validate(const Reader& rd, const Json& root) {
  rd.keys(root, "scenario", [] {
    std::vector<std::string> all = kTopLevel;
    for (const auto& [suite, secs] : suite_sections()) all.insert(all.end(), secs.begin(), secs.end());
    return all;
  }());
}

}  // namespace

Suite parse_suite(std::string_view name) {
  if (name == "theorem1") return Suite::Theorem1;
  if (name == "intersections") return Suite::Intersections;
  if (name == "spectral") return Suite::Spectral;
  if (name == "reilly") return Suite::Reilly;
  if (name == "all") return Suite::All;
  fail(ErrorCode::InvalidArgument, "unknown suite '" + std::string(name) + "'");
}

const char* to_string(Suite s) {
  switch (s) {
    case Suite::Theorem1: return "theorem1";
    case Suite::Intersections: return "intersections";
    case Suite::Spectral: return "spectral";
    case Suite::Reilly: return "reilly";
    case Suite::All: return "all";
  }
  return "all";
}

Scenario Scenario::parse(std::string_view text) {
  Scenario s;
  s.text_ = std::string(text);
  try {
    s.root_ = Json::parse(text);
  } catch (const Json::parse_error& e) {
    const auto [line, col] = position(text, e.byte == 0 ? 0 : e.byte - 1);
    std::string what = e.what();
    throw ParseError("scenario: malformed JSON: " + what, line, col);
  }
  const Reader rd(s.text_);
  if (!s.root_.is_object()) rd.error("", "top level must be an object");
  validate(rd, s.root_);
  s.name_ = rd.str(s.root_, "name");
  try {
    s.suite_ = parse_suite(rd.str(s.root_, "suite"));
  } catch (const Error& e) {
    rd.error("suite", e.what());
  }
  const double seed = rd.num(s.root_, "seed", 1.0);
  if (seed < 0 || seed != std::floor(seed)) rd.error("seed", "expected a nonnegative integer");
  s.seed_ = static_cast<std::uint64_t>(seed);
  if (s.sections(s.suite_).empty()) rd.error("suite", "scenario has no sections for its suite");
  for (const auto& [suite, secs] : suite_sections())
    for (const std::string& sec : secs)
      if (s.root_.contains(sec) && !s.root_.at(sec).is_object()) rd.error(sec, "expected an object");
  return s;
}

Scenario Scenario::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open scenario '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::vector<std::string> Scenario::sections(Suite s) const {
  std::vector<std::string> out;
  for (const auto& [key, value] : root_.items()) {
    for (const auto& [suite, secs] : suite_sections()) {
      if (s != Suite::All && suite != to_string(s)) continue;
      if (std::find(secs.begin(), secs.end(), key) != secs.end()) out.push_back(key);
    }
  }
  return out;
}

VerificationReport run_scenario(const Scenario& sc, const RunOptions& opts) {
  if (opts.refine && *opts.refine < 2) fail(ErrorCode::InvalidArgument, "refine needs K >= 2");
  const Suite suite = opts.suite.value_or(sc.suite());
  const std::vector<std::string> secs = sc.sections(suite);
  if (secs.empty())
    fail(ErrorCode::InvalidArgument, "scenario '" + sc.name() + "' has no sections for suite '" + to_string(suite) + "'");
  const Reader rd(sc.text());
  VerificationReport rep;
  rep.scenario = sc.name();
  rep.suite = to_string(suite);
  rep.provenance.scenario_hash = hash_tag(sc.text());
  rep.provenance.tolerance_scale = opts.tolerance_scale;
  std::string where = "model";
  try {
    const Model model = build_model(rd, sc.root());
    Runner runner(sc, opts, rd, model);
    rep.provenance.seed = runner.seed();
    for (const std::string& sec : secs) {
      where = sec;
      for (CheckRecord& c : runner.run(sec, sc.root().at(sec))) rep.checks.push_back(std::move(c));
    }
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw Error(e.code(), "scenario '" + sc.name() + "', section '" + where + "': " + e.what());
  }
  return rep;
}

}  // namespace warplab
