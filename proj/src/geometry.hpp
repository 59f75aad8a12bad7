// SPDX-License-Identifier: Apache-2.0
//
// Warped products B x_f F over a flat base B (an interval, a circle or a flat
// torus of dimension m <= 4) with fiber F of dimension q. Only the curvature
// components that involve base directions are provided.
#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "expr.hpp"
#include "warp.hpp"

namespace warplab {

constexpr std::size_t kMaxBaseDim = 4;
using Jet4 = Jet<kMaxBaseDim>;

/// A positive function on the flat torus R^m / (L_1 Z x ... x L_m Z) written in
/// the variables t1..tm.
class ScalarFieldM {
 public:
  static ScalarFieldM from_expression(std::string_view expr, std::vector<double> periods);

  std::size_t dim() const { return periods_.size(); }
  const std::vector<double>& periods() const { return periods_; }
  const std::string& text() const { return expr_.text(); }

  Jet4 jet(std::span<const double> x) const;
  double value(std::span<const double> x) const { return jet(x).value; }

 private:
  ScalarFieldM(Expression e, std::vector<double> periods)
      : expr_(std::move(e)), periods_(std::move(periods)) {}

  Expression expr_;
  std::vector<double> periods_;
};

struct FiberDescriptor {
  enum class Kind { Sphere, Circle, Abstract };

  Kind kind = Kind::Sphere;
  int q = 1;
  double radius = 1.0;
  double volume = 0.0;
  /// (eigenvalue, multiplicity) of -Delta on the fiber, ascending, zero first.
  std::vector<std::pair<double, int>> spectrum;

  static FiberDescriptor sphere(int q, double radius = 1.0, int levels = 8);
  static FiberDescriptor circle(double radius = 1.0, int levels = 8);
  static FiberDescriptor abstract(int q, double volume,
                                  std::vector<std::pair<double, int>> spectrum = {});

  /// q = 1: the warped Ricci formulas assume dim F > 1.
  bool degenerate() const { return q == 1; }
};

double sphere_volume(int q, double radius = 1.0);

/// Value, gradient and Hessian of the warp at a base point.
struct BaseJet {
  std::size_t m = 1;
  double f = 0.0;
  std::array<double, kMaxBaseDim> grad{};
  std::array<double, kMaxBaseDim * kMaxBaseDim> hess{};

  double hess_at(std::size_t i, std::size_t k) const { return hess[i * kMaxBaseDim + k]; }
  double laplacian() const;
  double grad_norm2() const;
};

class WarpedProductSpace {
 public:
  WarpedProductSpace(WarpingFunction warp, FiberDescriptor fiber);
  WarpedProductSpace(ScalarFieldM field, FiberDescriptor fiber);

  std::size_t base_dim() const { return field_ ? field_->dim() : 1; }
  const FiberDescriptor& fiber() const { return fiber_; }
  int q() const { return fiber_.q; }

  /// Present for one-dimensional bases.
  const std::optional<WarpingFunction>& warp() const { return warp_; }
  const std::optional<ScalarFieldM>& field() const { return field_; }

  /// Compact bases are circles and tori.
  bool compact_base() const;
  /// Lower corner and side lengths of the base parameter box.
  std::vector<double> base_lower() const;
  std::vector<double> base_lengths() const;

  BaseJet base_jet(std::span<const double> x) const;

 private:
  std::optional<WarpingFunction> warp_;
  std::optional<ScalarFieldM> field_;
  FiberDescriptor fiber_;
};

/// Ric(X, Y) = -(q/f) Hess f(X, Y) for base vectors X, Y (the base is flat).
double ricci_horizontal(const WarpedProductSpace& space, std::span<const double> x,
                        std::span<const double> X, std::span<const double> Y);

/// Ric(d_t, d_t) = -q f''/f on one-dimensional bases.
double ricci_dt_dt(const WarpedProductSpace& space, double t);

/// Density f^q of the warped volume with respect to dx dvol_F.
double volume_element(const WarpedProductSpace& space, std::span<const double> x);
double volume_element(const WarpedProductSpace& space, double t);

/// Tangent vector split into its base component and its fiber component, the
/// latter in an orthonormal frame of the warped metric.
struct SplitVector {
  double base = 0.0;
  std::vector<double> fiber;

  double norm() const;
};

/// nabla_X d_t = H(t) (X - <X, d_t> d_t).
SplitVector covariant_dt(const WarpedProductSpace& space, double t, const SplitVector& X);

/// |q Delta(ln f) + sum_k Ric(E_k, E_k) - q(q-1)|grad ln f|^2|, with the
/// warped Laplacian of a base function u given by Delta_B u + q <grad ln f, grad u>.
double log_warp_identity_residual(const WarpedProductSpace& space, std::span<const double> x);
double log_warp_identity_residual(const WarpedProductSpace& space, double t);

}  // namespace warplab
