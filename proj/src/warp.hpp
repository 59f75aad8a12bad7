// SPDX-License-Identifier: Apache-2.0
//
// Warping functions f > 0 on an interval or a circle, with exact first and
// second derivatives and the slice mean curvature H = f'/f derived from them.
#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "jet.hpp"

namespace warplab {

class Domain1D {
 public:
  enum class Kind { Interval, Circle };

  static Domain1D interval(double a, double b);
  static Domain1D circle(double period);

  Kind kind() const { return kind_; }
  bool is_circle() const { return kind_ == Kind::Circle; }
  double lower() const { return a_; }
  double upper() const { return b_; }
  double length() const { return b_ - a_; }

  bool contains(double t) const;
  /// Circle domains wrap t into [0, L); interval domains reject t outside
  /// [a, b] with DomainError.
  double reduce(double t) const;

 private:
  Domain1D(Kind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}

  Kind kind_;
  double a_;
  double b_;
};

struct WarpSample {
  double f = 0.0;
  double df = 0.0;
  double d2f = 0.0;
};

struct SchwarzschildParams {
  double mass = 1.0;
  int exponent = 2;  // fiber dimension q
  double r0 = 2.0;
  double tmax = 5.0;
  double step = 1e-3;
};

class WarpingFunction {
 public:
  static WarpingFunction from_expression(std::string_view expr, Domain1D domain,
                                         std::string name = {});

  /// Catalog entries: constant(c), two-plus-cos, cosh, affine(a, b),
  /// schwarzschild(m, q, r0, tmax, step). Missing parameters take defaults.
  static WarpingFunction catalog(std::string_view name, std::span<const double> params = {},
                                 std::optional<Domain1D> domain = std::nullopt);

  /// Radial profile f' = sqrt(1 - 2m / f^q), f(0) = r0, tabulated by RK4.
  static WarpingFunction schwarzschild(const SchwarzschildParams& params);

  WarpSample eval(double t) const;
  Dual2 jet(double t) const;

  double mean_curvature(double t) const;
  double mean_curvature_prime(double t) const;

  const Domain1D& domain() const;
  const std::string& name() const;
  /// True when the defining expression contains no variable.
  bool is_constant() const;

  /// Evenly spaced sample abscissae (periodic grids exclude the endpoint).
  std::vector<double> sample_points(std::size_t count) const;

  /// Richardson estimate of the tabulation error; zero for expression warps.
  double integration_error_estimate() const;

  struct Model;

 private:
  explicit WarpingFunction(std::shared_ptr<const Model> model);
  void validate() const;

  std::shared_ptr<const Model> model_;
};

struct MeanCurvatureSigns {
  bool positive = false;      // H > 0 at every sample
  bool nondecreasing = false; // H' >= 0 at every sample
  double min_h = 0.0;
  double min_hprime = 0.0;
};

MeanCurvatureSigns mean_curvature_signs(const WarpingFunction& wf, std::size_t samples = 1024);

}  // namespace warplab
