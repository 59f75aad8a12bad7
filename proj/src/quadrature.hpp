// SPDX-License-Identifier: Apache-2.0
//
// Composite quadrature with deterministic pairwise reductions and a node
// doubling Cauchy test.
#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace warplab {

/// Pairwise (cascade) summation. The split points depend only on the length,
/// so results do not depend on how the terms were produced.
double pairwise_sum(std::span<const double> terms);

enum class QuadratureKind { TrapezoidPeriodic, SimpsonInterval };

struct QuadratureRule {
  QuadratureKind kind = QuadratureKind::TrapezoidPeriodic;
  std::size_t nodes = 512;  // per axis; Simpson rounds up to an even count
};

constexpr std::size_t kMinQuadratureNodes = 16;

struct QuadratureStep {
  std::size_t nodes = 0;
  double value = 0.0;
};

struct QuadratureResult {
  double value = 0.0;
  std::size_t nodes = 0;
  std::vector<QuadratureStep> history;
};

using Integrand1D = std::function<double(double)>;
using IntegrandND = std::function<double(std::span<const double>)>;

/// One application of the rule on [a, b] (period b - a for the trapezoid).
double apply_rule(const QuadratureRule& rule, const Integrand1D& g, double a, double b);

/// Tensor-product periodic trapezoid over the box lower + [0, L_i).
double apply_torus_rule(std::size_t nodes, const IntegrandND& g, std::span<const double> lower,
                        std::span<const double> lengths);

/// Doubles the node count until two successive values differ by at most
/// tol * max(1, |value|). Throws NonConvergence after three failed doublings.
QuadratureResult integrate(const QuadratureRule& rule, const Integrand1D& g, double a, double b,
                           double tol = 1e-10);

QuadratureResult integrate_torus(std::size_t nodes, const IntegrandND& g,
                                 std::span<const double> lower, std::span<const double> lengths,
                                 double tol = 1e-10);

}  // namespace warplab
