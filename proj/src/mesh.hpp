// SPDX-License-Identifier: Apache-2.0
//
// Finite-volume Laplace-Beltrami operators on a circle, a flat torus, and
// surfaces of revolution ds^2 + r(s)^2 dbeta^2.
//
// Every operator is stored as a symmetric positive semidefinite stiffness
// matrix K and a lumped (diagonal) mass M, with -Delta ~ M^{-1} K. Rows of K
// sum to zero, so constants are in the kernel.
#pragma once

#include <Eigen/Sparse>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "warp.hpp"

namespace warplab {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

/// Radius function of a surface of revolution over [s0, s1], with exact first
/// and second derivatives.
struct RevolutionProfile {
  std::string name;
  double s0 = 0.0;
  double s1 = 1.0;
  std::function<double(double)> r, dr, ddr;

  static RevolutionProfile disc(double radius = 1.0);
  static RevolutionProfile sphere(double radius = 1.0);
  static RevolutionProfile cylinder(double length, double radius = 1.0);
  /// r = f(s) on [s0, s1]; s is already arclength in dt^2 + f^2 dbeta^2.
  static RevolutionProfile from_warp(const WarpingFunction& wf, double s0, double s1);

  /// Gaussian curvature -r''/r.
  double gauss_curvature(double s) const { return -ddr(s) / r(s); }
};

enum class EdgeKind { Pole, Neumann, Dirichlet };

class DiscreteLaplacian {
 public:
  enum class Kind { Circle, FlatTorus, Revolution };

  /// N equally spaced nodes on a circle of the given radius.
  static DiscreteLaplacian circle(double radius, std::size_t nodes);
  /// n1 x n2 periodic grid on R^2 / (L1 Z x L2 Z).
  static DiscreteLaplacian flat_torus(double L1, double L2, std::size_t n1, std::size_t n2);
  /// ns radial intervals and nbeta angular nodes. Pole edges need r = 0 there;
  /// Dirichlet nodes are kept in the operator and flagged.
  static DiscreteLaplacian revolution(const RevolutionProfile& profile, std::size_t ns,
                                      std::size_t nbeta, EdgeKind inner, EdgeKind outer);

  Kind kind() const { return kind_; }
  std::size_t size() const { return static_cast<std::size_t>(mass_.size()); }
  const SparseMatrix& stiffness() const { return K_; }
  const Vector& mass() const { return mass_; }
  const std::vector<bool>& dirichlet() const { return dirichlet_; }
  bool has_dirichlet() const;

  // Revolution-mesh layout.
  std::size_t ns() const { return ns_; }
  std::size_t nbeta() const { return nbeta_; }
  double hs() const { return hs_; }
  double hbeta() const { return hbeta_; }
  EdgeKind inner() const { return inner_; }
  EdgeKind outer() const { return outer_; }
  const RevolutionProfile& profile() const { return profile_; }
  double s_at(std::size_t ring) const { return profile_.s0 + hs_ * static_cast<double>(ring); }
  double beta_at(std::size_t j) const { return hbeta_ * static_cast<double>(j); }
  /// Node index of ring i, angle j (pole rings ignore j).
  std::size_t node(std::size_t ring, std::size_t j) const;
  bool pole_ring(std::size_t ring) const;

  /// Nodal interpolant of g(s, beta) on a revolution mesh.
  Vector sample(const std::function<double(double, double)>& g) const;

  /// -Delta u = M^{-1} K u.
  Vector apply(const Vector& u) const;

 private:
  Kind kind_ = Kind::Circle;
  SparseMatrix K_;
  Vector mass_;
  std::vector<bool> dirichlet_;

  RevolutionProfile profile_;
  std::size_t ns_ = 0, nbeta_ = 0;
  double hs_ = 0.0, hbeta_ = 0.0;
  EdgeKind inner_ = EdgeKind::Neumann, outer_ = EdgeKind::Neumann;
  std::vector<std::size_t> ring_offset_;
};

}  // namespace warplab
