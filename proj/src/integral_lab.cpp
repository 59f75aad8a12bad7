// SPDX-License-Identifier: Apache-2.0
#include "integral_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "error.hpp"

namespace warplab {

namespace {

double lhs_density(const WarpedProductSpace& space, std::span<const double> x) {
  const BaseJet b = space.base_jet(x);
  const double q = space.q();
  return -(q / b.f) * b.laplacian() * std::pow(b.f, q);
}

double rhs_density(const WarpedProductSpace& space, std::span<const double> x) {
  const BaseJet b = space.base_jet(x);
  const double q = space.q();
  return q * (q - 1.0) * b.grad_norm2() / (b.f * b.f) * std::pow(b.f, q);
}

double side(const WarpedProductSpace& space, std::size_t nodes, bool left) {
  const std::vector<double> lo = space.base_lower(), len = space.base_lengths();
  auto g = [&](std::span<const double> x) {
    return left ? lhs_density(space, x) : rhs_density(space, x);
  };
  return space.fiber().volume * apply_torus_rule(nodes, g, lo, len);
}

double spread(const WarpedProductSpace& space, std::size_t nodes) {
  const std::vector<double> lo = space.base_lower(), len = space.base_lengths();
  double fmin = std::numeric_limits<double>::infinity(), fmax = -fmin;
  apply_torus_rule(nodes,
                   [&](std::span<const double> x) {
                     const double f = space.base_jet(x).f;
                     fmin = std::min(fmin, f);
                     fmax = std::max(fmax, f);
                     return 0.0;
                   },
                   lo, len);
  return fmax - fmin;
}

}  // namespace

InequalityReport theorem1_sides(const WarpedProductSpace& space, const QuadratureOptions& opts) {
  if (!space.compact_base())
    fail(ErrorCode::InvalidArgument, "theorem1_sides needs a compact (circle or torus) base");
  InequalityReport r;
  r.degenerate = space.fiber().degenerate();
  const std::vector<double> lo = space.base_lower(), len = space.base_lengths();
  const double vol = space.fiber().volume;
  const QuadratureResult L = integrate_torus(
      opts.nodes, [&](std::span<const double> x) { return vol * lhs_density(space, x); }, lo, len,
      opts.tol);
  const QuadratureResult R = integrate_torus(
      opts.nodes, [&](std::span<const double> x) { return vol * rhs_density(space, x); }, lo, len,
      opts.tol);
  r.lhs = L.value;
  r.rhs = R.value;
  r.nodes = std::max(L.nodes, R.nodes);
  for (std::size_t i = 0; i < std::min(L.history.size(), R.history.size()); ++i)
    r.history.push_back({L.history[i].nodes, L.history[i].value, R.history[i].value});
  r.residual = std::abs(r.lhs - r.rhs);
  r.warp_spread = spread(space, r.nodes);
  r.product_verdict = r.residual <= 1e-8 * (1.0 + std::abs(r.rhs)) && r.warp_spread <= 1e-10;
  return r;
}

std::vector<SidesStep> theorem1_refinement(const WarpedProductSpace& space, std::size_t nodes,
                                           int levels) {
  if (!space.compact_base())
    fail(ErrorCode::InvalidArgument, "theorem1_refinement needs a compact base");
  std::vector<SidesStep> out;
  for (int k = 0; k < levels; ++k) {
    const std::size_t n = nodes << k;
    out.push_back({n, side(space, n, true), side(space, n, false)});
  }
  return out;
}

namespace {

void check_window(const WarpingFunction& wf, double a, double b) {
  if (!(a < b)) fail(ErrorCode::InvalidArgument, "window needs a < b");
  const Domain1D& d = wf.domain();
  if (!d.is_circle() && (a < d.lower() || b > d.upper()))
    fail(ErrorCode::DomainError, "window lies outside the warp's domain");
}

}  // namespace

double noncompact_window_integral(const WarpingFunction& wf, int q, double fiber_volume, double a,
                                  double b, const QuadratureOptions& opts) {
  check_window(wf, a, b);
  const QuadratureRule rule{QuadratureKind::SimpsonInterval, opts.nodes};
  auto g = [&](double t) {
    const WarpSample s = wf.eval(t);
    return s.d2f * std::pow(s.f, q - 1);
  };
  return -q * fiber_volume * integrate(rule, g, a, b, opts.tol).value;
}

double window_by_parts(const WarpingFunction& wf, int q, double fiber_volume, double a, double b,
                       const QuadratureOptions& opts) {
  check_window(wf, a, b);
  const QuadratureRule rule{QuadratureKind::SimpsonInterval, opts.nodes};
  auto g = [&](double t) {
    const WarpSample s = wf.eval(t);
    return s.df * s.df * std::pow(s.f, q - 2);
  };
  return q * (q - 1.0) * fiber_volume * integrate(rule, g, a, b, opts.tol).value;
}

}  // namespace warplab
