// SPDX-License-Identifier: Apache-2.0
//
// Lowest nonzero eigenpairs of K phi = lambda M phi.
#pragma once

#include <cstdint>
#include <vector>

#include "mesh.hpp"

namespace warplab {

struct Eigenpair {
  double lambda = 0.0;
  Vector phi;              // nodal values, normalized so phi^T M phi = 1
  double residual = 0.0;   // |A y - lambda y| / |y| for A = M^{-1/2} K M^{-1/2}
};

struct EigenOptions {
  double tol = 1e-8;
  std::uint64_t seed = 12345;
  double shift = 1e-3;         // K + shift M is factored once
  std::size_t krylov = 40;     // initial Lanczos length, doubled on failure
  std::size_t max_doublings = 6;
};

/// Shift-invert Lanczos with full reorthogonalization. One converged Ritz pair
/// is locked per sweep, so repeated eigenvalues come out with their
/// multiplicity. Constants are deflated; meshes with Dirichlet nodes are
/// rejected.
std::vector<Eigenpair> lowest_eigenpairs(const DiscreteLaplacian& L, std::size_t k,
                                         const EigenOptions& opts = {});

}  // namespace warplab
