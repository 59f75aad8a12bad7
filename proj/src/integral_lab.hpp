// SPDX-License-Identifier: Apache-2.0
//
// Integrated Ricci curvature of a compact warped product versus the squared
// mean curvature of its slices, and the windowed integral that replaces it
// on noncompact bases.
#pragma once

#include <cstddef>
#include <vector>

#include "geometry.hpp"
#include "quadrature.hpp"

namespace warplab {

struct QuadratureOptions {
  std::size_t nodes = 512;  // per base axis
  double tol = 1e-10;
};

struct SidesStep {
  std::size_t nodes = 0;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct InequalityReport {
  double lhs = 0.0;  // Vol(F) * int sum_k Ric(E_k, E_k) f^q
  double rhs = 0.0;  // q(q-1) Vol(F) * int |grad f / f|^2 f^q
  double residual = 0.0;
  double warp_spread = 0.0;  // max f - min f over the quadrature nodes
  bool product_verdict = false;
  bool degenerate = false;  // q = 1
  std::size_t nodes = 0;
  std::vector<SidesStep> history;
};

/// Equality is declared when residual <= 1e-8 (1 + |rhs|) and the warp is
/// constant to within 1e-10.
InequalityReport theorem1_sides(const WarpedProductSpace& space, const QuadratureOptions& opts = {});

/// lhs and rhs at nodes, 2 nodes, ..., 2^(levels-1) nodes without the Cauchy test.
std::vector<SidesStep> theorem1_refinement(const WarpedProductSpace& space, std::size_t nodes,
                                           int levels);

/// -q Vol(F) int_a^b f'' f^(q-1) dt over a window of the warp's domain.
double noncompact_window_integral(const WarpingFunction& wf, int q, double fiber_volume, double a,
                                  double b, const QuadratureOptions& opts = {});

/// q(q-1) Vol(F) int_a^b (f')^2 f^(q-2) dt: what the window integral becomes
/// after integrating by parts over a full period.
double window_by_parts(const WarpingFunction& wf, int q, double fiber_volume, double a, double b,
                       const QuadratureOptions& opts = {});

}  // namespace warplab
