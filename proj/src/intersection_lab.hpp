// SPDX-License-Identifier: Apache-2.0
//
// Rotation hypersurfaces in R^{n+1}, their intersections with hyperplanes and
// axis-centred spheres, slice geometry, the height function of curves in a
// warped surface, and a radial subharmonic witness.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fd_embedding.hpp"
#include "warp.hpp"

namespace warplab {

/// Profile quantities at arclength s: x1(s), r(s) and their s-derivatives.
struct ProfilePoint {
  double x = 0.0, dx = 0.0, ddx = 0.0;
  double r = 0.0, dr = 0.0, ddr = 0.0;
};

class RotationHypersurface {
 public:
  /// Graph profile (t, f(t)) reparametrized by arclength.
  static RotationHypersurface from_warp(const WarpingFunction& wf, int ambient_dim);
  /// Round sphere of the given radius centred at the origin; the parameter is
  /// the polar angle measured from the point (-R, 0).
  static RotationHypersurface sphere(double radius, int ambient_dim);

  int ambient_dim() const { return n_ + 1; }
  int n() const { return n_; }
  const std::optional<WarpingFunction>& warp() const { return warp_; }

  /// Profile parameter t to arclength s and back.
  double arclength(double t) const;
  double parameter(double s) const;

  ProfilePoint profile(double s) const;

  /// phi(s, Phi) = (x1(s), r(s) Phi), Phi a unit vector of R^n.
  fd::Vec embed(double s, const fd::Vec& Phi) const;
  /// (-r', x1' Phi): the normal pointing away from the axis.
  fd::Vec normal(double s, const fd::Vec& Phi) const;
  /// Tangent along the meridian, (x1', r' Phi).
  fd::Vec meridian(double s, const fd::Vec& Phi) const;

  /// Principal curvatures for the outward normal, with the sign convention
  /// that makes round spheres positive.
  double kappa_meridian(double s) const;
  double kappa_parallel(double s) const;
  double mean_curvature(double s) const;

  /// Chart (s, v) -> phi(s0 + s, normalize(Phi0 + E v)) around (s0, Phi0).
  fd::Chart chart(double s0, const fd::Vec& Phi0) const;

 private:
  RotationHypersurface() = default;

  int n_ = 2;
  std::optional<WarpingFunction> warp_;
  double sphere_radius_ = 0.0;
  // Graph profiles: cumulative arclength at uniform parameter nodes.
  double t0_ = 0.0, dt_ = 0.0, period_ = 0.0, period_length_ = 0.0;
  std::vector<double> table_;
};

/// Default base direction Phi = e_1 of R^n.
fd::Vec default_direction(int n);

struct PrincipalCheck {
  double kappa_meridian = 0.0;  // closed form
  double kappa_parallel = 0.0;
  double fd_meridian = 0.0;     // from the FD second fundamental form
  double fd_parallel = 0.0;
  double fd_mean = 0.0;
  double tangency_residual = 0.0;  // max |<eta, d phi>| over the chart axes
  double max_error = 0.0;
};

PrincipalCheck principal_curvature_check(const RotationHypersurface& M, double s,
                                         const fd::Vec& Phi, const fd::Stencil& st = {});

struct AngleReport {
  double phi = 0.0;      // closed form, cos phi = <eta, e_1>
  double fd_phi = 0.0;   // from an FD normal
};

/// Angle between M and the hyperplane {x1 = t0}. TangencyError when
/// sin(phi) <= tol.
AngleReport intersection_angle(const RotationHypersurface& M, double t0, double tol = 1e-8,
                               const fd::Stencil& st = {});

/// The second hypersurface N through the parallel at t0.
struct CuttingHypersurface {
  enum class Kind { Hyperplane, Sphere };
  Kind kind = Kind::Hyperplane;
  double center = 0.0;  // sphere centre (center, 0, ..., 0)

  static CuttingHypersurface hyperplane() { return {Kind::Hyperplane, 0.0}; }
  static CuttingHypersurface sphere(double center) { return {Kind::Sphere, center}; }
};

struct IntersectionReport {
  double phi = 0.0;
  double cos_phi = 0.0;
  double sin_phi = 0.0;
  double h_sigma_m = 0.0;   // <H_Sigma^M, eta*>
  double h_sigma_m_closed = 0.0;  // -r'/r for the parallel of a rotation hypersurface
  double closed_form_error = 0.0; // |h_sigma_m - h_sigma_m_closed|, the FD truncation error
  double h_sigma_n = 0.0;   // <H_Sigma^N, xi*>
  double h_n = 0.0;         // <H_N, xi>
  double vector_residual = 0.0;  // |H_Sigma^M - (H_Sigma^N)^T - (H_N)^T|
  double residual_plus = 0.0;    // |h_sigma_m - (h_sigma_n cos + h_n sin)|
  double residual_minus = 0.0;   // |h_sigma_m - (h_sigma_n cos - h_n sin)|
  double decomposition_residual = 0.0;  // min of the two scalar residuals
  int sign = 0;             // +1 / -1 when exactly one sign matches, 0 otherwise
  bool normal_verdict = false;
  double slice_form_norm = 0.0;
};

IntersectionReport decomposition_check(const RotationHypersurface& M, const CuttingHypersurface& N,
                                       double t0, const fd::Stencil& st = {},
                                       bool flip_orientation = false, double tol = 1e-6);

struct SliceGeodesity {
  double warped_norm = 0.0;    // |f'|/f sqrt(n-1), intrinsic warped metric dt^2 + f^2 g
  double embedded_norm = 0.0;  // FD norm of the parallel's second fundamental form in M
  bool verdict = false;        // embedded_norm <= tol
};

SliceGeodesity slice_geodesity(const RotationHypersurface& M, double t0, double tol = 1e-8,
                               const fd::Stencil& st = {});

/// Unit-speed curve in R x_f S^1 whose angle with d_t is
/// alpha(sigma) = a_0 + sum_k (a_k cos k sigma + b_k sin k sigma).
class CurveInWarpedSurface {
 public:
  CurveInWarpedSurface(WarpingFunction wf, std::vector<double> cos_coeffs,
                       std::vector<double> sin_coeffs, double t_start, double beta_start,
                       double length, double step = 1e-3);

  /// Random smooth curve; deterministic for a given seed.
  static CurveInWarpedSurface random(const WarpingFunction& wf, std::uint64_t seed,
                                     double length = 2.0);

  double alpha(double sigma) const;
  double alpha_prime(double sigma) const;
  double length() const { return length_; }
  double step() const { return step_; }
  /// Height t and angle beta at grid index i (sigma = i * step).
  double height(std::size_t i) const { return t_[i]; }
  double beta(std::size_t i) const { return beta_[i]; }
  std::size_t size() const { return t_.size(); }
  const WarpingFunction& warp() const { return wf_; }

 private:
  WarpingFunction wf_;
  std::vector<double> a_, b_;
  double length_, step_;
  std::vector<double> t_, beta_;
};

struct HeightResidual {
  double h = 0.0;
  double max_residual = 0.0;
};

struct HeightLaplacianReport {
  std::vector<HeightResidual> steps;
  std::vector<double> orders;  // log2 ratios of successive residuals
};

/// Both sides of Delta h = H(h)(1 - |grad h|^2) + <d_t, H_c> along the curve,
/// with every derivative of the tabulated curve taken by FD of step h.
HeightLaplacianReport height_laplacian_check(const CurveInWarpedSurface& c,
                                             const std::vector<double>& steps = {0.04, 0.02, 0.01});

/// max over samples of Delta u for u = (1 + |x|^2)^{-(n-2)/2} on R^n, points
/// uniform in the ball of the given radius. Includes the origin.
double parabolicity_witness(int n, std::size_t samples, std::uint64_t seed = 1,
                            double radius = 10.0);

/// Radial Laplacian u'' + (n-1) u'/rho of the witness (n u''(0) at the origin).
double witness_laplacian(int n, double rho);

}  // namespace warplab
