// SPDX-License-Identifier: Apache-2.0
#include "mesh.hpp"

#include <cmath>
#include <numbers>

#include "error.hpp"

namespace warplab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// 4-point Gauss-Legendre on [a, b].
double gauss4(const std::function<double(double)>& g, double a, double b) {
  static constexpr double x[] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                 0.8611363115940526};
  static constexpr double w[] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                 0.3478548451374538};
  const double m = 0.5 * (a + b), h = 0.5 * (b - a);
  double sum = 0.0;
  for (int k = 0; k < 4; ++k) sum += w[k] * g(m + h * x[k]);
  return h * sum;
}

struct Assembler {
  std::vector<Eigen::Triplet<double>> entries;
  void edge(std::size_t a, std::size_t b, double w) {
    entries.emplace_back(a, a, w);
    entries.emplace_back(b, b, w);
    entries.emplace_back(a, b, -w);
    entries.emplace_back(b, a, -w);
  }
  SparseMatrix build(std::size_t n) {
    SparseMatrix K(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    K.setFromTriplets(entries.begin(), entries.end());
    K.makeCompressed();
    return K;
  }
};

}  // namespace

RevolutionProfile RevolutionProfile::disc(double radius) {
  if (!(radius > 0)) fail(ErrorCode::InvalidArgument, "disc radius must be positive");
  return {"disc", 0.0, radius, [](double s) { return s; }, [](double) { return 1.0; },
          [](double) { return 0.0; }};
}

RevolutionProfile RevolutionProfile::sphere(double R) {
  if (!(R > 0)) fail(ErrorCode::InvalidArgument, "sphere radius must be positive");
  return {"sphere", 0.0, std::numbers::pi * R, [R](double s) { return R * std::sin(s / R); },
          [R](double s) { return std::cos(s / R); },
          [R](double s) { return -std::sin(s / R) / R; }};
}

RevolutionProfile RevolutionProfile::cylinder(double length, double radius) {
  if (!(length > 0) || !(radius > 0))
    fail(ErrorCode::InvalidArgument, "cylinder length and radius must be positive");
  return {"cylinder", 0.0, length, [radius](double) { return radius; },
          [](double) { return 0.0; }, [](double) { return 0.0; }};
}

RevolutionProfile RevolutionProfile::from_warp(const WarpingFunction& wf, double s0, double s1) {
  if (!(s1 > s0)) fail(ErrorCode::InvalidArgument, "profile interval is empty");
  return {wf.name(), s0, s1, [wf](double s) { return wf.eval(s).f; },
          [wf](double s) { return wf.eval(s).df; }, [wf](double s) { return wf.eval(s).d2f; }};
}

DiscreteLaplacian DiscreteLaplacian::circle(double radius, std::size_t nodes) {
  if (!(radius > 0) || nodes < 3) fail(ErrorCode::InvalidArgument, "circle grid needs radius > 0 and >= 3 nodes");
  DiscreteLaplacian L;
  L.kind_ = Kind::Circle;
  const double h = kTwoPi * radius / static_cast<double>(nodes);
  Assembler a;
  for (std::size_t i = 0; i < nodes; ++i) a.edge(i, (i + 1) % nodes, 1.0 / h);
  L.K_ = a.build(nodes);
  L.mass_ = Vector::Constant(static_cast<Eigen::Index>(nodes), h);
  L.dirichlet_.assign(nodes, false);
  L.nbeta_ = nodes;
  L.hbeta_ = kTwoPi / static_cast<double>(nodes);
  return L;
}

DiscreteLaplacian DiscreteLaplacian::flat_torus(double L1, double L2, std::size_t n1, std::size_t n2) {
  if (!(L1 > 0) || !(L2 > 0) || n1 < 3 || n2 < 3)
    fail(ErrorCode::InvalidArgument, "torus grid needs positive periods and >= 3 nodes per axis");
  DiscreteLaplacian L;
  L.kind_ = Kind::FlatTorus;
  const double h1 = L1 / static_cast<double>(n1), h2 = L2 / static_cast<double>(n2);
  const std::size_t n = n1 * n2;
  Assembler a;
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n2; ++j) {
      const std::size_t p = i * n2 + j;
      a.edge(p, ((i + 1) % n1) * n2 + j, h2 / h1);
      a.edge(p, i * n2 + (j + 1) % n2, h1 / h2);
    }
  L.K_ = a.build(n);
  L.mass_ = Vector::Constant(static_cast<Eigen::Index>(n), h1 * h2);
  L.dirichlet_.assign(n, false);
  L.ns_ = n1;
  L.nbeta_ = n2;
  L.hs_ = h1;
  L.hbeta_ = h2;
  return L;
}

DiscreteLaplacian DiscreteLaplacian::revolution(const RevolutionProfile& P, std::size_t ns,
                                                std::size_t nbeta, EdgeKind inner, EdgeKind outer) {
  if (ns < 2 || nbeta < 3) fail(ErrorCode::InvalidArgument, "revolution grid needs ns >= 2 and nbeta >= 3");
  const double edge_tol = 1e-12 * (1.0 + std::abs(P.s1 - P.s0));
  if ((inner == EdgeKind::Pole) != (std::abs(P.r(P.s0)) <= edge_tol))
    fail(ErrorCode::InvalidArgument, "inner edge kind does not match r(s0)");
  if ((outer == EdgeKind::Pole) != (std::abs(P.r(P.s1)) <= edge_tol))
    fail(ErrorCode::InvalidArgument, "outer edge kind does not match r(s1)");

  DiscreteLaplacian L;
  L.kind_ = Kind::Revolution;
  L.profile_ = P;
  L.ns_ = ns;
  L.nbeta_ = nbeta;
  L.inner_ = inner;
  L.outer_ = outer;
  L.hs_ = (P.s1 - P.s0) / static_cast<double>(ns);
  L.hbeta_ = kTwoPi / static_cast<double>(nbeta);
  const double hs = L.hs_, hb = L.hbeta_;

  L.ring_offset_.resize(ns + 2);
  L.ring_offset_[0] = 0;
  for (std::size_t i = 0; i <= ns; ++i)
    L.ring_offset_[i + 1] = L.ring_offset_[i] + (L.pole_ring(i) ? 1 : nbeta);
  const std::size_t n = L.ring_offset_[ns + 1];

  L.mass_.resize(static_cast<Eigen::Index>(n));
  L.dirichlet_.assign(n, false);
  Assembler a;
  for (std::size_t i = 0; i <= ns; ++i) {
    const double s = L.s_at(i);
    const double lo = i == 0 ? s : s - 0.5 * hs;
    const double hi = i == ns ? s : s + 0.5 * hs;
    const double area = gauss4(P.r, lo, hi);
    const bool boundary = (i == 0 && inner == EdgeKind::Dirichlet) || (i == ns && outer == EdgeKind::Dirichlet);
    if (L.pole_ring(i)) {
      L.mass_[static_cast<Eigen::Index>(L.node(i, 0))] = kTwoPi * area;
    } else {
      // Midpoint rule for the face integral of 1/r; exact when d_beta u grows
      // linearly in s, which keeps the rings next to a pole consistent.
      const double angular = (hi - lo) / (P.r(s) * hb);
      for (std::size_t j = 0; j < nbeta; ++j) {
        const std::size_t p = L.node(i, j);
        L.mass_[static_cast<Eigen::Index>(p)] = hb * area;
        L.dirichlet_[p] = boundary;
        a.edge(p, L.node(i, (j + 1) % nbeta), angular);
      }
    }
    if (i < ns) {
      const double radial = P.r(s + 0.5 * hs) * hb / hs;
      for (std::size_t j = 0; j < nbeta; ++j) a.edge(L.node(i, j), L.node(i + 1, j), radial);
    }
  }
  L.K_ = a.build(n);
  return L;
}

bool DiscreteLaplacian::has_dirichlet() const {
  for (bool d : dirichlet_)
    if (d) return true;
  return false;
}

bool DiscreteLaplacian::pole_ring(std::size_t ring) const {
  if (kind_ != Kind::Revolution) return false;
  return (ring == 0 && inner_ == EdgeKind::Pole) || (ring == ns_ && outer_ == EdgeKind::Pole);
}

std::size_t DiscreteLaplacian::node(std::size_t ring, std::size_t j) const {
  if (kind_ == Kind::Circle) return j % nbeta_;
  if (kind_ == Kind::FlatTorus) return (ring % ns_) * nbeta_ + j % nbeta_;
  return ring_offset_[ring] + (pole_ring(ring) ? 0 : j % nbeta_);
}

Vector DiscreteLaplacian::sample(const std::function<double(double, double)>& g) const {
  Vector u(static_cast<Eigen::Index>(size()));
  if (kind_ == Kind::Circle) {
    for (std::size_t j = 0; j < nbeta_; ++j) u[static_cast<Eigen::Index>(j)] = g(0.0, beta_at(j));
    return u;
  }
  if (kind_ == Kind::FlatTorus) {
    for (std::size_t i = 0; i < ns_; ++i)
      for (std::size_t j = 0; j < nbeta_; ++j)
        u[static_cast<Eigen::Index>(node(i, j))] = g(hs_ * static_cast<double>(i), hbeta_ * static_cast<double>(j));
    return u;
  }
  for (std::size_t i = 0; i <= ns_; ++i)
    for (std::size_t j = 0; j < (pole_ring(i) ? 1 : nbeta_); ++j)
      u[static_cast<Eigen::Index>(node(i, j))] = g(s_at(i), beta_at(j));
  return u;
}

Vector DiscreteLaplacian::apply(const Vector& u) const {
  return (K_ * u).cwiseQuotient(mass_);
}

}  // namespace warplab
