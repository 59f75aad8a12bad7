// SPDX-License-Identifier: Apache-2.0
#include "reilly.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <algorithm>
#include <cmath>
#include <limits>

#include "error.hpp"

namespace warplab {

namespace {

double relative_gap(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-12});
}

// Second-order finite differences of nodal values on the (s, beta) grid.
class GridField {
 public:
  GridField(const DiscreteLaplacian& mesh, const Vector& u) : m_(mesh), u_(u) {}

  double at(std::size_t i, std::ptrdiff_t j) const {
    const auto nb = static_cast<std::ptrdiff_t>(m_.nbeta());
    const auto jj = static_cast<std::size_t>(((j % nb) + nb) % nb);
    return u_[static_cast<Eigen::Index>(m_.node(i, jj))];
  }

  // Stencils in s for any ring-indexed function g(i).
  template <class G>
  double d_s(const G& g, std::size_t i) const {
    const double h = m_.hs();
    const std::size_t n = m_.ns();
    if (i == 0) return (-3 * g(0) + 4 * g(1) - g(2)) / (2 * h);
    if (i == n) return (3 * g(n) - 4 * g(n - 1) + g(n - 2)) / (2 * h);
    return (g(i + 1) - g(i - 1)) / (2 * h);
  }
  template <class G>
  double d_ss(const G& g, std::size_t i) const {
    const double h2 = m_.hs() * m_.hs();
    const std::size_t n = m_.ns();
    if (i == 0) return (2 * g(0) - 5 * g(1) + 4 * g(2) - g(3)) / h2;
    if (i == n) return (2 * g(n) - 5 * g(n - 1) + 4 * g(n - 2) - g(n - 3)) / h2;
    return (g(i + 1) - 2 * g(i) + g(i - 1)) / h2;
  }

  double us(std::size_t i, std::size_t j) const {
    return d_s([&](std::size_t k) { return at(k, static_cast<std::ptrdiff_t>(j)); }, i);
  }
  double uss(std::size_t i, std::size_t j) const {
    return d_ss([&](std::size_t k) { return at(k, static_cast<std::ptrdiff_t>(j)); }, i);
  }
  double ub(std::size_t i, std::size_t j) const {
    const auto jj = static_cast<std::ptrdiff_t>(j);
    return (at(i, jj + 1) - at(i, jj - 1)) / (2 * m_.hbeta());
  }
  double ubb(std::size_t i, std::size_t j) const {
    const auto jj = static_cast<std::ptrdiff_t>(j);
    return (at(i, jj + 1) - 2 * at(i, jj) + at(i, jj - 1)) / (m_.hbeta() * m_.hbeta());
  }
  double usb(std::size_t i, std::size_t j) const {
    return d_s([&](std::size_t k) { return ub(k, j); }, i);
  }

 private:
  const DiscreteLaplacian& m_;
  const Vector& u_;
};

BoundaryTerms boundary_terms(const DiscreteLaplacian& mesh, const GridField& g, std::size_t ring,
                             double orientation) {
  const RevolutionProfile& P = mesh.profile();
  const double s = mesh.s_at(ring);
  const double r = P.r(s);
  const double II = orientation * P.dr(s) / r;
  const double dl = r * mesh.hbeta();
  BoundaryTerms b;
  b.mean_curvature = II;
  for (std::size_t j = 0; j < mesh.nbeta(); ++j) {
    const double u_nu = orientation * g.us(ring, j);
    const double lap = g.ubb(ring, j) / (r * r);
    const double tangential = g.ub(ring, j) / r;
    b.h_term += II * u_nu * u_nu * dl;
    b.laplacian_term += 2.0 * u_nu * lap * dl;
    b.second_form_term += II * tangential * tangential * dl;
  }
  return b;
}

}  // namespace

DirichletProblem DirichletProblem::disc(std::function<double(double)> f0, std::size_t ns,
                                        std::size_t nbeta) {
  DirichletProblem p;
  p.profile = RevolutionProfile::disc(1.0);
  p.inner = EdgeKind::Pole;
  p.ns = ns;
  p.nbeta = nbeta;
  p.boundary = std::move(f0);
  return p;
}

HarmonicSolution harmonic_extension(const DirichletProblem& problem) {
  if (!problem.boundary) fail(ErrorCode::InvalidArgument, "missing boundary data");
  if (problem.inner == EdgeKind::Dirichlet)
    fail(ErrorCode::InvalidArgument, "the inner edge must be a pole or a Neumann circle");
  HarmonicSolution sol{DiscreteLaplacian::revolution(problem.profile, problem.ns, problem.nbeta,
                                                     problem.inner, EdgeKind::Dirichlet),
                       Vector(), 0.0, 0, 0.0, false};
  const DiscreteLaplacian& mesh = sol.mesh;
  const std::size_t n = mesh.size();

  std::vector<Eigen::Index> interior(n, -1);
  Eigen::Index count = 0;
  for (std::size_t p = 0; p < n; ++p)
    if (!mesh.dirichlet()[p]) interior[p] = count++;

  Vector u = Vector::Zero(static_cast<Eigen::Index>(n));
  double fmin = std::numeric_limits<double>::infinity(), fmax = -fmin;
  for (std::size_t j = 0; j < mesh.nbeta(); ++j) {
    const double v = problem.boundary(mesh.beta_at(j));
    u[static_cast<Eigen::Index>(mesh.node(mesh.ns(), j))] = v;
    fmin = std::min(fmin, v);
    fmax = std::max(fmax, v);
  }

  std::vector<Eigen::Triplet<double>> entries;
  Vector rhs = Vector::Zero(count);
  const SparseMatrix& K = mesh.stiffness();
  for (Eigen::Index col = 0; col < K.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(K, col); it; ++it) {
      const Eigen::Index row = interior[static_cast<std::size_t>(it.row())];
      if (row < 0) continue;
      const Eigen::Index c = interior[static_cast<std::size_t>(it.col())];
      if (c >= 0) {
        entries.emplace_back(row, c, it.value());
      } else {
        rhs[row] -= it.value() * u[it.col()];
      }
    }
  SparseMatrix Kii(count, count);
  Kii.setFromTriplets(entries.begin(), entries.end());

  Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper> cg;
  cg.setTolerance(problem.cg_tol);
  cg.setMaxIterations(std::max<Eigen::Index>(1000, 20 * count));
  cg.compute(Kii);
  const Vector ui = cg.solve(rhs);
  sol.iterations = static_cast<std::size_t>(cg.iterations());
  const double bnorm = rhs.norm();
  sol.relative_residual = bnorm > 0 ? (Kii * ui - rhs).norm() / bnorm : (Kii * ui).norm();
  if (!(sol.relative_residual <= 1e-10))
    fail(ErrorCode::NonConvergence, "harmonic extension: CG residual " + std::to_string(sol.relative_residual));

  for (std::size_t p = 0; p < n; ++p)
    if (interior[p] >= 0) u[static_cast<Eigen::Index>(p)] = ui[interior[p]];
  sol.u = std::move(u);
  const double slack = 1e-12 * std::max({1.0, std::abs(fmin), std::abs(fmax)});
  sol.maximum_principle = sol.u.minCoeff() >= fmin - slack && sol.u.maxCoeff() <= fmax + slack;
  for (std::size_t j = 0; j < mesh.nbeta(); ++j)
    sol.boundary_error = std::max(
        sol.boundary_error,
        std::abs(sol.u[static_cast<Eigen::Index>(mesh.node(mesh.ns(), j))] - problem.boundary(mesh.beta_at(j))));
  return sol;
}

ReillyLedger reilly_ledger(const HarmonicSolution& sol) {
  const DiscreteLaplacian& mesh = sol.mesh;
  const RevolutionProfile& P = mesh.profile();
  const GridField g(mesh, sol.u);
  const Vector& M = mesh.mass();
  ReillyLedger L;
  L.ns = mesh.ns();
  L.nbeta = mesh.nbeta();
  L.solver_residual = sol.relative_residual;

  const Vector Ku = mesh.stiffness() * sol.u;
  for (std::size_t p = 0; p < mesh.size(); ++p) {
    if (mesh.dirichlet()[p]) continue;
    const auto q = static_cast<Eigen::Index>(p);
    L.laplacian_sq += Ku[q] * Ku[q] / M[q];
  }

  // Hessian in the orthonormal frame (e_s, e_beta = d_beta / r).
  auto integrands = [&](std::size_t i, std::size_t j, double& hess_sq, double& ric) {
    const double s = mesh.s_at(i);
    const double r = P.r(s), dr = P.dr(s);
    const double us = g.us(i, j), ub = g.ub(i, j);
    const double h_ss = g.uss(i, j);
    const double h_sb = (g.usb(i, j) - dr / r * ub) / r;
    const double h_bb = g.ubb(i, j) / (r * r) + dr / r * us;
    hess_sq = h_ss * h_ss + 2 * h_sb * h_sb + h_bb * h_bb;
    ric = P.gauss_curvature(s) * (us * us + ub * ub / (r * r));
  };
  for (std::size_t i = 0; i <= mesh.ns(); ++i) {
    if (mesh.pole_ring(i)) {
      // Pole cell: average of the adjacent ring.
      const std::size_t ring = i == 0 ? 1 : mesh.ns() - 1;
      double hs = 0, rc = 0;
      for (std::size_t j = 0; j < mesh.nbeta(); ++j) {
        double a, b;
        integrands(ring, j, a, b);
        hs += a;
        rc += b;
      }
      const double w = M[static_cast<Eigen::Index>(mesh.node(i, 0))] / static_cast<double>(mesh.nbeta());
      L.hessian_sq += w * hs;
      L.ricci += w * rc;
      continue;
    }
    for (std::size_t j = 0; j < mesh.nbeta(); ++j) {
      double a, b;
      integrands(i, j, a, b);
      const double w = M[static_cast<Eigen::Index>(mesh.node(i, j))];
      L.hessian_sq += w * a;
      L.ricci += w * b;
    }
  }

  L.outer = boundary_terms(mesh, g, mesh.ns(), 1.0);
  if (mesh.inner() == EdgeKind::Neumann) L.inner = boundary_terms(mesh, g, 0, -1.0);
  L.lhs = L.laplacian_sq - L.hessian_sq - L.ricci;
  L.rhs = L.outer.total() + L.inner.total();
  L.residual = std::abs(L.lhs - L.rhs) / std::max({std::abs(L.lhs), std::abs(L.rhs), 1.0});
  L.kappa = L.outer.mean_curvature;
  L.nonpositive_mean_curvature = L.outer.mean_curvature <= 0.0;
  return L;
}

std::vector<ReillyLedger> reilly_refinement(DirichletProblem problem, std::size_t levels) {
  std::vector<ReillyLedger> out;
  for (std::size_t k = 0; k < levels; ++k) {
    out.push_back(reilly_ledger(harmonic_extension(problem)));
    problem.ns *= 2;
    problem.nbeta *= 2;
  }
  return out;
}

BoundaryData boundary_data(const HarmonicSolution& sol) {
  const DiscreteLaplacian& mesh = sol.mesh;
  const GridField g(mesh, sol.u);
  const double s = mesh.profile().s1;
  BoundaryData b;
  b.f = mesh.profile().r(s);
  b.H = mesh.profile().dr(s) / b.f;
  b.dl = b.f * mesh.hbeta();
  for (std::size_t j = 0; j < mesh.nbeta(); ++j) {
    b.f0.push_back(sol.u[static_cast<Eigen::Index>(mesh.node(mesh.ns(), j))]);
    b.u_nu.push_back(g.us(mesh.ns(), j));
    b.tangential.push_back(g.ub(mesh.ns(), j) / b.f);
  }
  return b;
}

Theorem4Report theorem4_bound(const HarmonicSolution& sol, double lambda) {
  const BoundaryData b = boundary_data(sol);
  if (!(b.H > 0)) fail(ErrorCode::NonpositiveMeanCurvature, "mean curvature of the slice is not positive");
  Theorem4Report rep;
  rep.ricci_term = reilly_ledger(sol).ricci;
  const double f4 = std::pow(b.f, 4);
  for (std::size_t j = 0; j < b.f0.size(); ++j) {
    rep.boundary_term += b.H * b.tangential[j] * b.tangential[j] * b.dl;
    rep.denominator += b.f0[j] * b.f0[j] / (f4 * b.H) * b.dl;
  }
  if (!(rep.denominator > 0)) fail(ErrorCode::DegenerateTestFunction, "boundary data vanishes");
  rep.lower_bound = (rep.ricci_term + rep.boundary_term) / rep.denominator;
  rep.lambda_sq = lambda * lambda;
  rep.margin = rep.lambda_sq - rep.lower_bound;
  return rep;
}

double square_completion_min(double H, double f, double lambda, const std::vector<double>& f0,
                             const std::vector<double>& u_nu) {
  if (!(H > 0)) fail(ErrorCode::NonpositiveMeanCurvature, "mean curvature of the slice is not positive");
  if (f0.size() != u_nu.size() || f0.empty()) fail(ErrorCode::InvalidArgument, "mismatched boundary samples");
  const double f2 = f * f;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < f0.size(); ++j) {
    const double v = H * u_nu[j] * u_nu[j] + 2 * (lambda / f2) * f0[j] * u_nu[j] +
                     lambda * lambda * f0[j] * f0[j] / (f2 * f2 * H);
    best = std::min(best, v);
  }
  return best;
}

double square_completion_check(const HarmonicSolution& sol, double lambda) {
  const BoundaryData b = boundary_data(sol);
  return square_completion_min(b.H, b.f, lambda, b.f0, b.u_nu);
}

KappaReport kappa_bound_check(const HarmonicSolution& sol, double lambda) {
  const BoundaryData b = boundary_data(sol);
  KappaReport k;
  k.kappa = b.H;  // the boundary is a curve: II has the single eigenvalue r'/r
  double f0_sq = 0.0;
  for (std::size_t j = 0; j < b.f0.size(); ++j) {
    k.lhs += b.H * b.tangential[j] * b.tangential[j] * b.dl;
    k.slice_energy += b.tangential[j] * b.tangential[j] * b.dl;
    k.flux += b.f0[j] * b.u_nu[j] * b.dl;
    f0_sq += b.f0[j] * b.f0[j] * b.dl;
  }
  const double eig = lambda / (b.f * b.f);
  k.rhs = k.kappa * eig * f0_sq;
  k.slice_eigen = eig * f0_sq;
  k.energy = sol.u.dot(sol.mesh.stiffness() * sol.u);
  k.green_residual = relative_gap(k.energy, k.flux);
  k.energy_residual = relative_gap(k.slice_energy, k.slice_eigen);
  k.holds = k.lhs >= k.rhs - 1e-2 * std::max(1e-12, std::abs(k.rhs));
  return k;
}

}  // namespace warplab
