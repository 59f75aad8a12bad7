// SPDX-License-Identifier: Apache-2.0
//
// Harmonic extension of slice data into a domain of a surface of revolution,
// the itemized Reilly identity, and the lower bound and boundary checks built
// on it.
//
// Omega = [s0, s1] x S^1 with metric ds^2 + r(s)^2 dbeta^2. The boundary circle
// K = {s = s1} carries Dirichlet data f0(beta); the inner edge is a pole or a
// Neumann circle. On K: outward normal d_s, H = II = r'/r, and the slice is
// the unit circle scaled by f = r(s1).
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mesh.hpp"

namespace warplab {

struct DirichletProblem {
  RevolutionProfile profile;
  EdgeKind inner = EdgeKind::Pole;
  std::size_t ns = 64;
  std::size_t nbeta = 64;
  std::function<double(double)> boundary;  // f0(beta)
  double cg_tol = 1e-12;                   // relative residual of the CG solve

  static DirichletProblem disc(std::function<double(double)> f0, std::size_t ns, std::size_t nbeta);
};

struct HarmonicSolution {
  DiscreteLaplacian mesh;
  Vector u;
  double relative_residual = 0.0;   // |K_II u_I + K_IB f0| / |K_IB f0|
  std::size_t iterations = 0;
  double boundary_error = 0.0;      // max |u - f0| on K, zero by construction
  bool maximum_principle = false;   // min f0 <= u <= max f0 up to 1e-12
};

/// Conjugate gradients (Jacobi preconditioned) on the interior block.
/// NonConvergence when the relative residual stays above 1e-10.
HarmonicSolution harmonic_extension(const DirichletProblem& problem);

struct BoundaryTerms {
  double mean_curvature = 0.0;  // H of the circle for its outward normal
  double h_term = 0.0;          // int H u_nu^2
  double laplacian_term = 0.0;  // int 2 u_nu Delta_K u
  double second_form_term = 0.0;// int II(grad_K u, grad_K u)
  double total() const { return h_term + laplacian_term + second_form_term; }
};

struct ReillyLedger {
  std::size_t ns = 0, nbeta = 0;
  double laplacian_sq = 0.0;  // int (Delta u)^2
  double hessian_sq = 0.0;    // int |Hess u|^2
  double ricci = 0.0;         // int Ric(grad u, grad u)
  BoundaryTerms outer;        // the slice K
  BoundaryTerms inner;        // Neumann inner circle, zero for a pole
  double lhs = 0.0;           // laplacian_sq - hessian_sq - ricci
  double rhs = 0.0;           // outer.total() + inner.total()
  double residual = 0.0;      // |lhs - rhs| / max(|lhs|, |rhs|, 1)
  double kappa = 0.0;         // min eigenvalue of II on K
  bool nonpositive_mean_curvature = false;
  double solver_residual = 0.0;
};

ReillyLedger reilly_ledger(const HarmonicSolution& sol);

/// Ledgers at (ns, nbeta) * 2^k for k < levels.
std::vector<ReillyLedger> reilly_refinement(DirichletProblem problem, std::size_t levels);

struct Theorem4Report {
  double ricci_term = 0.0;     // int_Omega Ric(grad u, grad u)
  double boundary_term = 0.0;  // int_K II(grad f0, grad f0)
  double denominator = 0.0;    // int_K f0^2 / (f^4 H)
  double lower_bound = 0.0;
  double lambda_sq = 0.0;
  double margin = 0.0;         // lambda^2 - lower_bound
};

/// lambda is the eigenvalue of f0 on the unit circle; on K it becomes
/// lambda / f^2. NonpositiveMeanCurvature when H <= 0 on K.
Theorem4Report theorem4_bound(const HarmonicSolution& sol, double lambda);

/// min over nodes of H u_nu^2 + 2 (lambda/f^2) f0 u_nu + lambda^2 f0^2 / (f^4 H).
double square_completion_min(double H, double f, double lambda, const std::vector<double>& f0,
                             const std::vector<double>& u_nu);
/// The same minimum on the boundary data of a solution.
double square_completion_check(const HarmonicSolution& sol, double lambda);

struct KappaReport {
  double kappa = 0.0;
  double lhs = 0.0;              // int_K II(grad f0, grad f0)
  double rhs = 0.0;              // kappa (lambda/f^2) int_K f0^2
  double energy = 0.0;           // int_Omega |grad u|^2
  double flux = 0.0;             // int_K f0 u_nu
  double green_residual = 0.0;   // relative
  double slice_energy = 0.0;     // int_K |grad f0|^2
  double slice_eigen = 0.0;      // (lambda/f^2) int_K f0^2
  double energy_residual = 0.0;  // relative
  bool holds = false;            // lhs >= rhs - 1e-2 max(1, |rhs|)
};

KappaReport kappa_bound_check(const HarmonicSolution& sol, double lambda);

/// Boundary samples on K (one per angular node).
struct BoundaryData {
  double f = 0.0;     // r(s1)
  double H = 0.0;     // r'(s1) / r(s1)
  std::vector<double> f0, u_nu, tangential;  // tangential = d f0 / d(arclength)
  double dl = 0.0;    // arclength per node
};

BoundaryData boundary_data(const HarmonicSolution& sol);

}  // namespace warplab
