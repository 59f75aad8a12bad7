// SPDX-License-Identifier: Apache-2.0
#include <chrono>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "error.hpp"
#include "integral_lab.hpp"

using namespace warplab;
using std::numbers::pi;

TEST_CASE("quadrature rules") {
  const QuadratureRule trap{QuadratureKind::TrapezoidPeriodic, 64};
  CHECK(integrate(trap, [](double t) { return std::sin(t) * std::sin(t); }, 0, 2 * pi).value ==
        doctest::Approx(pi).epsilon(1e-14));
  CHECK(integrate(trap, [](double t) { return (2 + std::cos(t)) * (2 + std::cos(t)); }, 0, 2 * pi)
            .value == doctest::Approx(9 * pi).epsilon(1e-14));
  const QuadratureRule simp{QuadratureKind::SimpsonInterval, 16};
  CHECK(integrate(simp, [](double) { return 1.0; }, 0, 1).value == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(integrate(simp, [](double t) { return std::exp(t); }, 0, 1, 1e-8).value ==
        doctest::Approx(std::exp(1.0) - 1).epsilon(1e-9));

  // An integrand that never settles: the node count enters the value.
  std::size_t calls = 0;
  CHECK_THROWS_AS(integrate(trap, [&](double) { return static_cast<double>(++calls); }, 0, 1), Error);
  const QuadratureRule tiny{QuadratureKind::TrapezoidPeriodic, 8};
  CHECK_THROWS_AS(apply_rule(tiny, [](double) { return 1.0; }, 0, 1), Error);

  std::vector<double> terms(1000, 0.1);
  CHECK(pairwise_sum(terms) == doctest::Approx(100.0).epsilon(1e-15));
}

TEST_CASE("integrated Ricci identity, two-plus-cos, q = 2") {
  const auto start = std::chrono::steady_clock::now();
  const WarpedProductSpace s(WarpingFunction::catalog("two-plus-cos"), FiberDescriptor::sphere(2));
  const InequalityReport r = theorem1_sides(s);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  // Independent oracle: 8 pi int (f')^2 = 8 pi int sin^2 on a midpoint grid.
  double acc = 0.0;
  const int n = 1000;
  for (int i = 0; i < n; ++i) {
    const double t = 2 * pi * (i + 0.5) / n;
    acc += std::sin(t) * std::sin(t);
  }
  const double oracle = 8 * pi * acc * 2 * pi / n;
  CHECK(oracle == doctest::Approx(8 * pi * pi).epsilon(1e-12));
  CHECK(r.lhs == doctest::Approx(oracle).epsilon(1e-6));
  CHECK(r.rhs == doctest::Approx(oracle).epsilon(1e-6));
  CHECK(r.nodes >= 512);
  CHECK_FALSE(r.product_verdict);
  CHECK_FALSE(r.degenerate);
  CHECK(r.warp_spread == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(secs < 1.0);
}

TEST_CASE("integrated Ricci identity: equality and degenerate cases") {
  const double c[] = {1.7};
  for (int q : {1, 2, 3}) {
    const WarpedProductSpace s(WarpingFunction::catalog("constant", c), FiberDescriptor::sphere(q));
    const InequalityReport r = theorem1_sides(s);
    CHECK(std::abs(r.lhs) <= 1e-12);
    CHECK(std::abs(r.rhs) <= 1e-12);
    CHECK(r.product_verdict);
  }
  const WarpedProductSpace q1(WarpingFunction::catalog("two-plus-cos"), FiberDescriptor::circle());
  const InequalityReport r1 = theorem1_sides(q1);
  CHECK(std::abs(r1.lhs) <= 1e-10);
  CHECK(std::abs(r1.rhs) <= 1e-10);
  CHECK(r1.degenerate);

  const WarpedProductSpace q3(WarpingFunction::catalog("two-plus-cos"), FiberDescriptor::sphere(3));
  const InequalityReport r3 = theorem1_sides(q3);
  CHECK(r3.rhs > 0);
  CHECK(r3.lhs == doctest::Approx(r3.rhs).epsilon(1e-10));
  CHECK_FALSE(r3.product_verdict);

  const WarpedProductSpace open(WarpingFunction::catalog("cosh"), FiberDescriptor::sphere(2));
  CHECK_THROWS_AS(theorem1_sides(open), Error);
}

TEST_CASE("integrated Ricci identity: on a flat torus base") {
  const WarpedProductSpace s(ScalarFieldM::from_expression("3 + cos(t1)", {2 * pi, 2 * pi}),
                             FiberDescriptor::sphere(2));
  QuadratureOptions o;
  o.nodes = 32;
  const InequalityReport r = theorem1_sides(s, o);
  // 2 pi times the one-dimensional value for 3 + cos t: 8 pi * pi * 2 pi.
  CHECK(r.lhs == doctest::Approx(16 * pi * pi * pi).epsilon(1e-10));
  CHECK(r.rhs == doctest::Approx(r.lhs).epsilon(1e-10));
}

TEST_CASE("refinement of a periodic integrand reaches machine precision quickly") {
  const WarpedProductSpace s(WarpingFunction::catalog("two-plus-cos"), FiberDescriptor::sphere(2));
  const auto steps = theorem1_refinement(s, 16, 3);
  REQUIRE(steps.size() == 3);
  CHECK(std::abs(steps[1].lhs - 8 * pi * pi) < 1e-12 * 8 * pi * pi * 10);
  CHECK(std::abs(steps[2].rhs - 8 * pi * pi) < 1e-12 * 8 * pi * pi * 10);
}

TEST_CASE("noncompact windows") {
  const double w = noncompact_window_integral(WarpingFunction::catalog("cosh"), 2, 4 * pi, -1, 1);
  CHECK(w < 0);
  CHECK(w == doctest::Approx(-8 * pi * (1 + std::sinh(2.0) / 2)).epsilon(1e-9));
  CHECK(std::abs(noncompact_window_integral(WarpingFunction::catalog("affine"), 2, 4 * pi, 0, 1)) ==
        0.0);
  const WarpingFunction tpc_interval =
      WarpingFunction::from_expression("2 + cos(t)", Domain1D::interval(0, 2 * pi));
  CHECK(std::abs(noncompact_window_integral(tpc_interval, 1, 2 * pi, 0, 2 * pi)) <= 1e-10);

  // Full period: integration by parts turns the window into a nonnegative integral.
  for (int q : {1, 2, 3, 4}) {
    const double lhs = noncompact_window_integral(tpc_interval, q, 1.0, 0, 2 * pi);
    const double rhs = window_by_parts(tpc_interval, q, 1.0, 0, 2 * pi);
    CHECK(rhs >= 0);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
  }
  CHECK_THROWS_AS(noncompact_window_integral(WarpingFunction::catalog("cosh"), 2, 1, -4, 0), Error);
}
