// SPDX-License-Identifier: Apache-2.0
//
// Finite-difference extrinsic geometry of parametrized submanifolds of R^N:
// tangent frames, induced metrics, normal spaces and mean curvature vectors.
#pragma once

#include <Eigen/Dense>
#include <functional>

namespace warplab::fd {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Chart = std::function<Vec(const Vec&)>;

struct Stencil {
  double h = 1e-3;
  /// Combine steps h and h/2 (Richardson) for fourth-order accuracy.
  bool richardson = true;
};

struct Jet2 {
  Vec point;
  Mat tangents;             // N x k, columns d_i phi
  std::vector<Mat> second;  // second[i].col(j) = d_i d_j phi
  Mat metric;               // k x k

  /// d_i d_j phi
  Vec dd(int i, int j) const { return second[static_cast<std::size_t>(i)].col(j); }
};

/// First and second derivatives of `chart` at u by central differences.
Jet2 derivatives(const Chart& chart, const Vec& u, const Stencil& st);

/// Orthogonal projector onto the column span of `basis`.
Mat projector(const Mat& basis);

/// Orthonormal basis of the orthogonal complement of the columns of `basis`.
Mat complement(const Mat& basis);

/// (1/k) g^{ij} P d_i d_j phi for the projector P onto a chosen normal space.
Vec mean_curvature(const Jet2& j, const Mat& normal_projector);

/// Second fundamental form b_ij = <d_i d_j phi, nu> for a unit normal nu.
Mat second_form(const Jet2& j, const Vec& nu);

/// Eigenvalues of g^{-1} b (principal curvatures when nu is a unit normal).
Vec shape_eigenvalues(const Mat& metric, const Mat& b);

/// sqrt(g^{ik} g^{jl} b_ij b_kl).
double form_norm(const Mat& metric, const Mat& b);

/// Unit vector field chart helper: normalize(p0 + sum u_i e_i) for an
/// orthonormal basis e_i of p0^perp. Used to put charts on round spheres.
Chart sphere_chart(const Vec& center, double radius, const Vec& point);

}  // namespace warplab::fd
