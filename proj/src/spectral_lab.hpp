// SPDX-License-Identifier: Apache-2.0
//
// Slice spectra, the first-eigenvalue upper bound for a hypersurface cutting
// the slices of a rotation surface, and the gradient identity for cos(theta).
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "eigensolver.hpp"
#include "geometry.hpp"
#include "mesh.hpp"
#include "warp.hpp"

namespace warplab {

/// The first k nonzero eigenvalue levels of the slice {t} x P, i.e. those of
/// P divided by f(t)^2, with their multiplicities. MissingSpectrum when P has
/// no tabulated spectrum.
std::vector<std::pair<double, int>> slice_spectrum(const FiberDescriptor& P, const WarpingFunction& wf,
                                                   double t, std::size_t k);

/// M: rotation surface of the graph of f in R^3. N: a round sphere centred on
/// the axis at (center, 0, 0), or the plane {x1 = t0}.
struct Theorem3Config {
  enum class Cut { Sphere, Plane };
  WarpingFunction wf;
  Cut cut = Cut::Sphere;
  double center = 0.0;
  double radius = 1.0;
  double plane_t = 0.0;
  std::size_t ns = 64;       // sphere mesh rings
  std::size_t nbeta = 128;   // sphere mesh angles
  double tol = 1e-10;        // degeneracy threshold
  double mollify = 0.0;      // tent width (in arclength) of the test function; 0 = sharp ring
  EigenOptions eigen{};
};

/// One parallel of Sigma = M cap N.
struct SigmaSample {
  double t = 0.0;          // profile parameter of the parallel
  double length = 0.0;     // 2 pi f(t)
  double cos_theta = 0.0;  // <xi, d_t>
  double sin_theta = 0.0;
  double t_norm = 0.0;     // |T|, T = d_t - cos(theta) xi
  double shape_norm = 0.0; // |A(T)|
  double mean_curvature = 0.0;  // H of the parallel in M
};

struct AngleField {
  std::vector<SigmaSample> samples;
  double unit_residual = 0.0;  // max ||T|^2 + cos^2 - 1|
};

AngleField angle_field(const Theorem3Config& config);

struct Theorem3Report {
  AngleField field;
  double shape_term = 0.0;      // 2 int |A(T)|^2
  double curvature_term = 0.0;  // 2 int H^2 cos^2 sin^2
  double denominator = 0.0;     // int cos^2
  double bound = 0.0;
  double lambda1 = 0.0;         // discrete lambda_1(N)
  double lambda1_exact = 0.0;   // 2 / R^2
  double margin = 0.0;          // bound - lambda1
  double rayleigh_lhs = 0.0;    // lambda1 int phi^2, phi = cos(theta) on the rings nearest Sigma
  double rayleigh_rhs = 0.0;    // int |grad phi|^2
  double centered_lhs = 0.0;    // same with the mean of phi removed
  double centered_rhs = 0.0;
  bool rayleigh_ok = false;
};

/// DegenerateTestFunction when int cos^2 <= tol or the numerator vanishes.
Theorem3Report theorem3_bound(const Theorem3Config& config);

/// In the surface dt^2 + r(t)^2 dbeta^2 with N the curve beta = b(t):
/// FD derivative of cos(theta) along N against -A(T) - H cos(theta) T.
struct GradientIdentityConfig {
  WarpingFunction wf;
  std::string curve = "0.3*sin(t)";  // b(t)
  double t_lo = 0.0;
  double t_hi = 6.0;
  std::size_t samples = 64;
  std::vector<double> steps{0.04, 0.02, 0.01};
};

struct GradientIdentityReport {
  std::vector<double> steps;
  std::vector<double> residuals;  // max over samples, per step
  std::vector<double> orders;
  double max_cos = 0.0;           // max |cos(theta)| seen along N
};

GradientIdentityReport gradient_identity_check(const GradientIdentityConfig& config);

}  // namespace warplab
