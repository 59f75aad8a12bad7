// SPDX-License-Identifier: Apache-2.0
#include "eigensolver.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <random>

#include "error.hpp"

namespace warplab {

namespace {

void orthogonalize(Vector& w, const std::vector<Vector>& basis) {
  // Two passes of classical Gram-Schmidt.
  for (int pass = 0; pass < 2; ++pass)
    for (const Vector& b : basis) w -= b.dot(w) * b;
}

}  // namespace

std::vector<Eigenpair> lowest_eigenpairs(const DiscreteLaplacian& L, std::size_t k,
                                         const EigenOptions& opts) {
  if (k == 0) fail(ErrorCode::InvalidArgument, "k must be at least 1");
  if (L.has_dirichlet()) fail(ErrorCode::InvalidArgument, "eigenproblem mesh has Dirichlet nodes");
  const std::size_t n = L.size();
  if (k + 1 > n) fail(ErrorCode::InvalidArgument, "k exceeds the number of nontrivial modes");

  const Vector sqrt_m = L.mass().cwiseSqrt();
  const Vector inv_sqrt_m = sqrt_m.cwiseInverse();
  const SparseMatrix shifted = L.stiffness() + opts.shift * SparseMatrix(L.mass().asDiagonal());
  Eigen::SimplicialLLT<SparseMatrix> llt(shifted);
  if (llt.info() != Eigen::Success) fail(ErrorCode::NonConvergence, "factorization of K + shift M failed");

  // Symmetrized operator A = M^{-1/2} K M^{-1/2} and its shifted inverse.
  auto apply_a = [&](const Vector& y) -> Vector {
    return inv_sqrt_m.cwiseProduct(L.stiffness() * inv_sqrt_m.cwiseProduct(y));
  };
  auto apply_inv = [&](const Vector& y) -> Vector {
    return sqrt_m.cwiseProduct(llt.solve(sqrt_m.cwiseProduct(y)));
  };

  std::vector<Vector> locked{sqrt_m.normalized()};
  std::vector<Eigenpair> out;
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss;

  while (out.size() < k) {
    const std::size_t available = n - locked.size();
    std::size_t m = std::min(opts.krylov, available);
    bool done = false;
    for (std::size_t attempt = 0; attempt <= opts.max_doublings && !done; ++attempt) {
      Vector v(static_cast<Eigen::Index>(n));
      for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = gauss(rng);
      orthogonalize(v, locked);
      v.normalize();
      std::vector<Vector> V{v};
      std::vector<double> alpha, beta;
      double scale = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        Vector w = apply_inv(V[j]);
        alpha.push_back(V[j].dot(w));
        scale = std::max(scale, std::abs(alpha.back()));
        orthogonalize(w, locked);
        orthogonalize(w, V);
        const double b = w.norm();
        // A tiny residual means the Krylov space is invariant; normalizing it
        // would amplify rounding into a non-orthogonal vector.
        if (j + 1 == m || b <= 1e-10 * scale) break;
        beta.push_back(b);
        w /= b;
        orthogonalize(w, locked);
        orthogonalize(w, V);
        V.push_back(w.normalized());
      }
      const Eigen::Index dim = static_cast<Eigen::Index>(alpha.size());
      Eigen::MatrixXd T = Eigen::MatrixXd::Zero(dim, dim);
      for (Eigen::Index i = 0; i < dim; ++i) {
        T(i, i) = alpha[static_cast<std::size_t>(i)];
        if (i + 1 < dim) T(i, i + 1) = T(i + 1, i) = beta[static_cast<std::size_t>(i)];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
      const Eigen::VectorXd s = es.eigenvectors().col(dim - 1);
      Vector y = Vector::Zero(static_cast<Eigen::Index>(n));
      for (Eigen::Index i = 0; i < dim; ++i) y += s[i] * V[static_cast<std::size_t>(i)];
      orthogonalize(y, locked);
      y.normalize();
      const double lambda = y.dot(apply_a(y));  // Rayleigh quotient of the top Ritz vector
      const double res = (apply_a(y) - lambda * y).norm();
      if (res <= opts.tol * std::max(1.0, std::abs(lambda))) {
        locked.push_back(y);
        out.push_back({lambda, inv_sqrt_m.cwiseProduct(y), res});
        done = true;
      } else if (m == available) {
        break;
      } else {
        m = std::min(2 * m, available);
      }
    }
    if (!done) fail(ErrorCode::NonConvergence, "Lanczos did not converge for eigenpair " + std::to_string(out.size() + 1));
  }
  std::stable_sort(out.begin(), out.end(), [](const Eigenpair& a, const Eigenpair& b) { return a.lambda < b.lambda; });
  return out;
}

}  // namespace warplab
