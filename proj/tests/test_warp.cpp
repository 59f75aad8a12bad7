// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "error.hpp"
#include "expr.hpp"
#include "warp.hpp"

using namespace warplab;
using std::numbers::pi;

namespace {

std::vector<WarpingFunction> catalog_all() {
  const double c3[] = {3.0};
  return {
      WarpingFunction::catalog("constant", c3),
      WarpingFunction::catalog("two-plus-cos"),
      WarpingFunction::catalog("cosh"),
      WarpingFunction::catalog("affine"),
      WarpingFunction::catalog("schwarzschild"),
  };
}

// Max over samples of |exact - FD| at the three steps; returns observed orders.
std::vector<double> fd_orders(const WarpingFunction& wf, int which) {
  const double hs[] = {1e-3, 5e-4, 2.5e-4};
  std::mt19937_64 rng(7);
  const double a = wf.domain().lower() + 0.01, b = wf.domain().upper() - 0.01;
  std::uniform_real_distribution<double> u(a, b);
  double err[3] = {0, 0, 0};
  for (int k = 0; k < 100; ++k) {
    const double t = u(rng);
    const WarpSample s = wf.eval(t);
    for (int j = 0; j < 3; ++j) {
      const double h = hs[j];
      double fd, exact;
      if (which == 1) {
        fd = (wf.eval(t + h).f - wf.eval(t - h).f) / (2 * h);
        exact = s.df;
      } else {
        fd = (wf.eval(t + h).df - wf.eval(t - h).df) / (2 * h);
        exact = s.d2f;
      }
      err[j] = std::max(err[j], std::abs(fd - exact));
    }
  }
  std::vector<double> orders;
  if (err[0] < 1e-12) return orders;  // derivative is polynomial of low degree
  for (int j = 0; j < 2; ++j) orders.push_back(std::log2(err[j] / err[j + 1]));
  return orders;
}

}  // namespace

TEST_CASE("expression parser") {
  const Expression e = Expression::parse("2 + cos(t)^2 * -t", {"t"});
  const double x = 0.3;
  CHECK(e.evaluate<double>(std::span<const double>(&x, 1)) ==
        doctest::Approx(2 - std::cos(x) * std::cos(x) * x));
  CHECK(Expression::parse("pi * e", {}).is_constant());
  CHECK_THROWS_AS(Expression::parse("2 + foo(t)", {"t"}), ParseError);
  try {
    Expression::parse("1 + * t", {"t"});
    FAIL("expected ParseError");
  } catch (const ParseError& err) {
    CHECK(err.column() == 5);
  }
}

TEST_CASE("catalog evaluations") {
  const double c3[] = {3.0};
  const WarpSample c = WarpingFunction::catalog("constant", c3).eval(1.7);
  CHECK(c.f == 3.0);
  CHECK(c.df == 0.0);
  CHECK(c.d2f == 0.0);

  const WarpingFunction tpc = WarpingFunction::catalog("two-plus-cos");
  const WarpSample a = tpc.eval(pi / 2);
  CHECK(a.f == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(a.df == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(std::abs(a.d2f) < 1e-15);
  const WarpSample b = tpc.eval(0.0);
  CHECK(b.f == 3.0);
  CHECK(b.df == 0.0);
  CHECK(b.d2f == -1.0);

  CHECK(tpc.mean_curvature(pi / 2) == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(tpc.mean_curvature_prime(0.0) == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));
  const WarpingFunction cst = WarpingFunction::catalog("constant", c3);
  CHECK(cst.mean_curvature(0.4) == 0.0);
  CHECK(cst.mean_curvature_prime(0.4) == 0.0);
  CHECK(cst.is_constant());
  CHECK_FALSE(tpc.is_constant());
}

TEST_CASE("circle domains wrap, intervals reject") {
  const WarpingFunction tpc = WarpingFunction::catalog("two-plus-cos");
  CHECK(tpc.eval(-pi / 2).df == doctest::Approx(1.0));
  CHECK(tpc.eval(2 * pi + 0.5).f == doctest::Approx(2 + std::cos(0.5)));
  const WarpingFunction ch = WarpingFunction::catalog("cosh");
  CHECK_THROWS_AS(ch.eval(3.5), Error);
  try {
    ch.eval(-4.0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DomainError);
  }
}

TEST_CASE("positivity and periodicity are enforced") {
  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::IoError;
  };
  CHECK(code_of([] { WarpingFunction::from_expression("cos(t)", Domain1D::circle(2 * pi)); }) ==
        ErrorCode::NonPositiveWarp);
  CHECK(code_of([] { WarpingFunction::from_expression("2 + cos(t)", Domain1D::circle(3.0)); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([] { Domain1D::interval(1.0, 1.0); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { Domain1D::circle(0.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("periodicity of circle warps") {
  const WarpingFunction tpc = WarpingFunction::catalog("two-plus-cos");
  double worst = 0.0;
  for (int k = 0; k < 64; ++k) {
    const double t = 2 * pi * k / 64.0 + 0.01;
    worst = std::max(worst, std::abs(tpc.eval(t).f - tpc.eval(t + 2 * pi).f));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("AD derivatives match central differences at order 2") {
  for (const WarpingFunction& wf : catalog_all()) {
    CAPTURE(wf.name());
    for (int which : {1, 2}) {
      CAPTURE(which);
      for (double p : fd_orders(wf, which)) CHECK(std::abs(p - 2.0) <= 0.3);
    }
  }
}

TEST_CASE("mean_curvature_prime matches FD of mean_curvature") {
  const WarpingFunction tpc = WarpingFunction::catalog("two-plus-cos");
  const double t = 0.7;
  double prev = 0.0;
  for (double h : {1e-3, 5e-4, 2.5e-4}) {
    const double fd = (tpc.mean_curvature(t + h) - tpc.mean_curvature(t - h)) / (2 * h);
    const double e = std::abs(fd - tpc.mean_curvature_prime(t));
    if (prev > 0) CHECK(std::log2(prev / e) == doctest::Approx(2.0).epsilon(0.15));
    prev = e;
  }
}

TEST_CASE("schwarzschild profile") {
  const WarpingFunction s = WarpingFunction::catalog("schwarzschild");
  CHECK(s.eval(0.0).df == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
  CHECK(s.eval(0.0).d2f == doctest::Approx(1.0 * 2 * std::pow(2.0, -3)).epsilon(1e-14));
  const MeanCurvatureSigns signs = mean_curvature_signs(s);
  CHECK(signs.positive);
  CHECK(s.integration_error_estimate() < 1e-10);

  // Along the profile f' stays consistent with the ODE.
  for (double t : {0.5, 1.2345, 4.9}) {
    const WarpSample w = s.eval(t);
    CHECK(w.df == doctest::Approx(std::sqrt(1 - 2.0 / (w.f * w.f))).epsilon(1e-14));
  }

  SchwarzschildParams flat;
  flat.mass = 0.0;
  flat.r0 = 1.0;
  const WarpingFunction lin = WarpingFunction::schwarzschild(flat);
  CHECK(lin.eval(2.5).f == doctest::Approx(3.5).epsilon(1e-12));
  CHECK(lin.eval(2.5).df == 1.0);

  SchwarzschildParams inside;
  inside.r0 = 1.2;  // 1.44 < 2m
  try {
    WarpingFunction::schwarzschild(inside);
    FAIL("expected HorizonError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::HorizonError);
  }
}
