// SPDX-License-Identifier: Apache-2.0
#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "error.hpp"
#include "reilly.hpp"
#include "spectral_lab.hpp"

using namespace warplab;
using std::numbers::pi;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::IoError;
}

void check_operator(const DiscreteLaplacian& L) {
  const Eigen::MatrixXd K(L.stiffness());
  CHECK((K - K.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * K.cwiseAbs().maxCoeff());
  CHECK(K.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-12 * K.cwiseAbs().maxCoeff());
  CHECK(L.mass().minCoeff() > 0);
}

// Dense generalized eigenvalues of (K, M), ascending, zero included.
Eigen::VectorXd dense_spectrum(const DiscreteLaplacian& L) {
  const Eigen::MatrixXd K(L.stiffness());
  const Eigen::MatrixXd M = L.mass().asDiagonal();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(K, M);
  return es.eigenvalues();
}

std::function<double(double)> cosk(int k) {
  return [k](double b) { return std::cos(k * b); };
}

}  // namespace

TEST_CASE("discrete operators are symmetric with constants in the kernel") {
  check_operator(DiscreteLaplacian::circle(1.5, 17));
  check_operator(DiscreteLaplacian::flat_torus(3.0, 2.0, 9, 7));
  check_operator(DiscreteLaplacian::revolution(RevolutionProfile::sphere(2.0), 10, 12, EdgeKind::Pole, EdgeKind::Pole));
  check_operator(DiscreteLaplacian::revolution(RevolutionProfile::disc(), 10, 12, EdgeKind::Pole, EdgeKind::Dirichlet));
  check_operator(DiscreteLaplacian::revolution(RevolutionProfile::cylinder(1.0), 6, 8, EdgeKind::Neumann,
                                               EdgeKind::Neumann));
  // Total mass is the area.
  const DiscreteLaplacian s = DiscreteLaplacian::revolution(RevolutionProfile::sphere(2.0), 40, 32, EdgeKind::Pole,
                                                            EdgeKind::Pole);
  CHECK(s.mass().sum() == doctest::Approx(16 * pi).epsilon(1e-10));
  CHECK(code_of([] {
          DiscreteLaplacian::revolution(RevolutionProfile::disc(), 8, 8, EdgeKind::Neumann, EdgeKind::Dirichlet);
        }) == ErrorCode::InvalidArgument);
}

TEST_CASE("Lanczos agrees with a dense generalized eigensolver") {
  const DiscreteLaplacian L =
      DiscreteLaplacian::revolution(RevolutionProfile::sphere(1.3), 12, 16, EdgeKind::Pole, EdgeKind::Pole);
  const Eigen::VectorXd ref = dense_spectrum(L);
  CHECK(std::abs(ref[0]) < 1e-10);
  const std::vector<Eigenpair> pairs = lowest_eigenpairs(L, 8);
  REQUIRE(pairs.size() == 8);
  for (std::size_t k = 0; k < 8; ++k) {
    CHECK(pairs[k].lambda == doctest::Approx(ref[static_cast<Eigen::Index>(k + 1)]).epsilon(1e-9));
    CHECK(pairs[k].residual <= 1e-8 * std::max(1.0, pairs[k].lambda));
    // M-normalized and M-orthogonal to constants.
    CHECK(pairs[k].phi.dot(L.mass().cwiseProduct(pairs[k].phi)) == doctest::Approx(1.0));
    CHECK(std::abs(pairs[k].phi.dot(L.mass())) < 1e-10);
  }
  // Same seed, same answer.
  const std::vector<Eigenpair> again = lowest_eigenpairs(L, 8);
  for (std::size_t k = 0; k < 8; ++k) CHECK(again[k].lambda == pairs[k].lambda);

  const DiscreteLaplacian torus = DiscreteLaplacian::flat_torus(1.0, 1.7, 8, 9);
  const Eigen::VectorXd tref = dense_spectrum(torus);
  const std::vector<Eigenpair> tp = lowest_eigenpairs(torus, 6);
  for (std::size_t k = 0; k < 6; ++k)
    CHECK(tp[k].lambda == doctest::Approx(tref[static_cast<Eigen::Index>(k + 1)]).epsilon(1e-9));
}

TEST_CASE("circle grid: lambda_1 = 1 with multiplicity 2") {
  const std::size_t N = 256;
  const DiscreteLaplacian L = DiscreteLaplacian::circle(1.0, N);
  const std::vector<Eigenpair> p = lowest_eigenpairs(L, 4);
  const double h = 2 * pi / N;
  const double exact1 = 4 / (h * h) * std::pow(std::sin(pi / N), 2);
  const double exact2 = 4 / (h * h) * std::pow(std::sin(2 * pi / N), 2);
  CHECK(p[0].lambda == doctest::Approx(exact1).epsilon(1e-10));
  CHECK(p[1].lambda == doctest::Approx(exact1).epsilon(1e-10));
  CHECK(p[2].lambda == doctest::Approx(exact2).epsilon(1e-10));
  CHECK(p[3].lambda == doctest::Approx(exact2).epsilon(1e-10));
  CHECK(std::abs(p[0].lambda - 1.0) <= h * h);
}

TEST_CASE("flat torus follows the Fourier pattern") {
  const double L1 = 3.0, L2 = 2.0;
  const std::size_t n1 = 60, n2 = 40;
  const std::vector<Eigenpair> p = lowest_eigenpairs(DiscreteLaplacian::flat_torus(L1, L2, n1, n2), 2);
  const double h1 = L1 / n1;
  const double discrete = 4 / (h1 * h1) * std::pow(std::sin(pi / n1), 2);
  CHECK(p[0].lambda == doctest::Approx(discrete).epsilon(1e-10));
  CHECK(p[1].lambda == doctest::Approx(discrete).epsilon(1e-10));
  CHECK(p[0].lambda == doctest::Approx(std::pow(2 * pi / L1, 2)).epsilon(1e-2));
}

TEST_CASE("round sphere mesh: lambda_1 = 2/R^2 with multiplicity 3") {
  const double R = 2.0;
  double prev = 0.0;
  for (std::size_t ns : {16, 32, 64}) {
    const DiscreteLaplacian L =
        DiscreteLaplacian::revolution(RevolutionProfile::sphere(R), ns, 2 * ns, EdgeKind::Pole, EdgeKind::Pole);
    const std::vector<Eigenpair> p = lowest_eigenpairs(L, 4);
    // The axisymmetric mode and the m = +-1 pair carry different O(h^2) errors.
    double err = 0.0;
    for (int k = 0; k < 3; ++k) err = std::max(err, std::abs(p[k].lambda - 2 / (R * R)));
    CHECK(err <= 0.01 * 2 / (R * R) * std::pow(16.0 / static_cast<double>(ns), 2));
    CHECK(p[3].lambda == doctest::Approx(6 / (R * R)).epsilon(2e-2));
    if (prev > 0) CHECK(std::log2(prev / err) == doctest::Approx(2.0).epsilon(0.1));
    prev = err;
  }
}

TEST_CASE("slice spectrum rescales the fiber spectrum") {
  const double two[] = {2.0};
  const WarpingFunction c2 = WarpingFunction::catalog("constant", two);
  const auto s1 = slice_spectrum(FiberDescriptor::circle(1.0), c2, 0.3, 2);
  CHECK(s1[0].first == doctest::Approx(0.25));
  CHECK(s1[0].second == 2);
  CHECK(s1[1].first == doctest::Approx(1.0));
  const double one[] = {1.0};
  const auto s2 = slice_spectrum(FiberDescriptor::sphere(2), WarpingFunction::catalog("constant", one), 0.0, 1);
  CHECK(s2[0].first == doctest::Approx(2.0));
  CHECK(s2[0].second == 3);
  const double three[] = {3.0};
  const auto s3 = slice_spectrum(FiberDescriptor::sphere(2), WarpingFunction::catalog("constant", three), 0.0, 3);
  const auto base = slice_spectrum(FiberDescriptor::sphere(2), WarpingFunction::catalog("constant", one), 0.0, 3);
  for (int k = 0; k < 3; ++k) CHECK(s3[k].first == doctest::Approx(base[k].first / 9));
  CHECK(code_of([&] { slice_spectrum(FiberDescriptor::abstract(2, 1.0), c2, 0.0, 1); }) ==
        ErrorCode::MissingSpectrum);
}

TEST_CASE("discrete slice spectrum converges to lambda/f^2 at order 2") {
  const WarpingFunction wf = WarpingFunction::catalog("two-plus-cos");
  const double t = 1.1;
  const double f = wf.eval(t).f;
  const double target = slice_spectrum(FiberDescriptor::circle(1.0), wf, t, 1)[0].first;
  CHECK(target == doctest::Approx(1 / (f * f)));
  double prev = 0.0;
  for (std::size_t N : {32, 64, 128}) {
    const double lam = lowest_eigenpairs(DiscreteLaplacian::circle(f, N), 1)[0].lambda;
    const double err = std::abs(lam - target);
    if (prev > 0) CHECK(std::abs(std::log2(prev / err) - 2.0) <= 0.2);
    prev = err;
  }
}

TEST_CASE("harmonic extension") {
  const HarmonicSolution c = harmonic_extension(DirichletProblem::disc([](double) { return 1.7; }, 16, 16));
  CHECK((c.u.array() - 1.7).abs().maxCoeff() <= 1e-10);
  CHECK(c.maximum_principle);

  for (int k : {1, 2}) {
    double prev = 0.0;
    for (std::size_t n : {32, 64, 128}) {
      const HarmonicSolution s = harmonic_extension(DirichletProblem::disc(cosk(k), n, n));
      const Vector exact = s.mesh.sample([k](double r, double b) { return std::pow(r, k) * std::cos(k * b); });
      const double err = (s.u - exact).cwiseAbs().maxCoeff();
      CHECK(s.maximum_principle);
      CHECK(s.relative_residual <= 1e-10);
      CHECK(s.boundary_error == 0.0);
      if (prev > 0) CHECK(std::log2(prev / err) >= 1.8);
      prev = err;
    }
  }
}

TEST_CASE("Reilly ledger on the unit disc") {
  SUBCASE("cos theta") {
    const ReillyLedger L = reilly_ledger(harmonic_extension(DirichletProblem::disc(cosk(1), 128, 128)));
    CHECK(std::abs(L.lhs) <= 0.02);
    CHECK(std::abs(L.rhs) <= 0.02);
    CHECK(L.outer.h_term == doctest::Approx(pi).epsilon(0.02));
    CHECK(L.outer.laplacian_term == doctest::Approx(-2 * pi).epsilon(0.02));
    CHECK(L.outer.second_form_term == doctest::Approx(pi).epsilon(0.02));
  }
  SUBCASE("cos 2 theta: -8 pi with monotone refinement") {
    const auto start = std::chrono::steady_clock::now();
    const std::vector<ReillyLedger> h = reilly_refinement(DirichletProblem::disc(cosk(2), 64, 64), 3);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CHECK(seconds < 10.0);
    REQUIRE(h.size() == 3);
    CHECK(h.back().ns == 256);
    for (std::size_t k = 0; k + 1 < h.size(); ++k) CHECK(h[k + 1].residual < h[k].residual);
    CHECK(h.back().residual <= 0.02);
    CHECK(h.back().lhs == doctest::Approx(-8 * pi).epsilon(0.02));
    CHECK(h.back().rhs == doctest::Approx(-8 * pi).epsilon(0.02));
    CHECK(h.back().hessian_sq == doctest::Approx(8 * pi).epsilon(0.02));
    CHECK(h.back().outer.laplacian_term == doctest::Approx(-16 * pi).epsilon(0.02));
    CHECK(h.back().laplacian_sq <= 1e-12);
    CHECK(std::abs(h.back().ricci) <= 1e-14);
    CHECK_FALSE(h.back().nonpositive_mean_curvature);
  }
}

TEST_CASE("Reilly ledger on a flat cylinder with a Neumann end") {
  const double L = 1.5;
  DirichletProblem p;
  p.profile = RevolutionProfile::cylinder(L);
  p.inner = EdgeKind::Neumann;
  p.ns = 64;
  p.nbeta = 64;
  p.boundary = cosk(1);
  const HarmonicSolution s = harmonic_extension(p);
  const Vector exact = s.mesh.sample([L](double x, double b) { return std::cosh(x) / std::cosh(L) * std::cos(b); });
  CHECK((s.u - exact).cwiseAbs().maxCoeff() <= 1e-3);
  const ReillyLedger led = reilly_ledger(s);
  CHECK(led.nonpositive_mean_curvature);
  CHECK(led.kappa == 0.0);
  CHECK(led.lhs == doctest::Approx(-2 * pi * std::tanh(L)).epsilon(0.02));
  CHECK(led.residual <= 0.02);
  CHECK(code_of([&] { theorem4_bound(s, 1.0); }) == ErrorCode::NonpositiveMeanCurvature);
  CHECK(code_of([&] { square_completion_check(s, 1.0); }) == ErrorCode::NonpositiveMeanCurvature);
  const KappaReport k = kappa_bound_check(s, 1.0);
  CHECK(k.rhs == 0.0);
  CHECK(k.lhs == 0.0);
  CHECK(k.holds);
}

TEST_CASE("Schwarzschild sheet") {
  const WarpingFunction wf = WarpingFunction::catalog("schwarzschild");
  CHECK(mean_curvature_signs(wf).positive);
  DirichletProblem p;
  p.profile = RevolutionProfile::from_warp(wf, 0.0, 5.0);
  p.inner = EdgeKind::Neumann;
  p.ns = 128;
  p.nbeta = 64;
  p.boundary = cosk(1);
  const HarmonicSolution s = harmonic_extension(p);
  const ReillyLedger led = reilly_ledger(s);
  CHECK_FALSE(led.nonpositive_mean_curvature);
  CHECK(led.ricci < 0);  // K = -f''/f < 0
  CHECK(led.residual <= 0.02);
  const Theorem4Report t4 = theorem4_bound(s, 1.0);
  CHECK(t4.margin >= -0.02);
  // Without the (negative) curvature term the bound is f'(t)^2 < 1.
  const double fp = wf.eval(5.0).df;
  CHECK(t4.boundary_term / t4.denominator == doctest::Approx(fp * fp).epsilon(0.01));
  CHECK(square_completion_check(s, 1.0) >= -1e-12);
}

TEST_CASE("lower bound, square completion and kappa on the disc") {
  const HarmonicSolution s1 = harmonic_extension(DirichletProblem::disc(cosk(1), 128, 128));
  const Theorem4Report a = theorem4_bound(s1, 1.0);
  CHECK(a.lower_bound == doctest::Approx(1.0).epsilon(0.01));
  CHECK(a.lambda_sq == 1.0);
  CHECK(std::abs(a.margin) <= 0.01);

  const HarmonicSolution s2 = harmonic_extension(DirichletProblem::disc(cosk(2), 128, 128));
  const Theorem4Report b = theorem4_bound(s2, 4.0);
  CHECK(b.lower_bound == doctest::Approx(4.0).epsilon(0.01));
  CHECK(b.margin == doctest::Approx(12.0).epsilon(0.01));

  CHECK(square_completion_check(s1, 1.0) >= -1e-12);
  CHECK(square_completion_check(s2, 4.0) >= -1e-12);
  // At the vertex u_nu = -lambda f0 / (f^2 H) the square vanishes.
  std::vector<double> f0, un;
  for (int j = 0; j < 32; ++j) {
    f0.push_back(std::cos(0.2 * j));
    un.push_back(-3.0 * f0.back() / (1.5 * 1.5 * 0.7));
  }
  CHECK(std::abs(square_completion_min(0.7, 1.5, 3.0, f0, un)) <= 1e-12);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> pert = un;
    for (double& v : pert) v += g(rng);
    CHECK(square_completion_min(0.7, 1.5, 3.0, f0, pert) >= -1e-12);
  }

  const KappaReport k1 = kappa_bound_check(s1, 1.0);
  CHECK(k1.kappa == 1.0);
  CHECK(k1.lhs == doctest::Approx(pi).epsilon(0.01));
  CHECK(k1.rhs == doctest::Approx(pi).epsilon(0.01));
  CHECK(k1.green_residual <= 0.01);
  CHECK(k1.energy_residual <= 0.01);
  CHECK(k1.holds);
  const KappaReport k2 = kappa_bound_check(s2, 4.0);
  CHECK(k2.lhs == doctest::Approx(4 * pi).epsilon(0.01));
  CHECK(k2.rhs == doctest::Approx(4 * pi).epsilon(0.01));
  CHECK(k2.green_residual <= 0.01);
  CHECK(k2.energy_residual <= 0.01);
}

TEST_CASE("first-eigenvalue bound for a sphere cutting a rotation surface") {
  Theorem3Config c{WarpingFunction::catalog("two-plus-cos")};
  c.center = 0.0;
  c.radius = 2.8;
  const Theorem3Report r = theorem3_bound(c);
  // f(0) = 3 > R: Sigma has four parallels, symmetric about t = 0.
  REQUIRE(r.field.samples.size() == 4);
  CHECK(r.field.unit_residual <= 1e-10);
  CHECK(r.lambda1 == doctest::Approx(2 / (2.8 * 2.8)).epsilon(0.02));
  CHECK(r.margin >= -0.02 * r.lambda1);
  CHECK(r.rayleigh_ok);
  CHECK(r.centered_lhs <= r.centered_rhs);

  // Independent oracle for Sigma: roots of t^2 + (2 + cos t)^2 = R^2 bracketed
  // in (0, 1.5) and (1.5, R).
  auto root = [](double lo, double hi) {
    const auto g = [](double t) { return t * t + std::pow(2 + std::cos(t), 2) - 2.8 * 2.8; };
    const bool rising = g(lo) < 0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      ((g(mid) < 0) == rising ? lo : hi) = mid;
    }
    return lo;
  };
  const double inner = root(0.0, 1.5), outer = root(1.5, 2.8);
  CHECK(r.field.samples[0].t == doctest::Approx(-outer).epsilon(1e-12));
  CHECK(r.field.samples[1].t == doctest::Approx(-inner).epsilon(1e-12));
  CHECK(r.field.samples[2].t == doctest::Approx(inner).epsilon(1e-12));
  CHECK(r.field.samples[3].t == doctest::Approx(outer).epsilon(1e-12));
  // Closed-form angle at a crossing: cos = (t + f f') / (R w).
  const double t2 = inner, f2 = 2 + std::cos(t2), d2 = -std::sin(t2);
  CHECK(r.field.samples[2].cos_theta ==
        doctest::Approx((t2 + f2 * d2) / (2.8 * std::sqrt(1 + d2 * d2))).epsilon(1e-12));

  // A wider sphere crosses the profile at shallow angles and the bound fails.
  c.radius = 4.0;
  const Theorem3Report wide = theorem3_bound(c);
  CHECK(wide.margin < 0);

  // The plane through a critical point of f: theta = 0 and T = 0.
  Theorem3Config plane{WarpingFunction::catalog("two-plus-cos")};
  plane.cut = Theorem3Config::Cut::Plane;
  plane.plane_t = 0.0;
  CHECK(code_of([&] { theorem3_bound(plane); }) == ErrorCode::DegenerateTestFunction);
  const AngleField f = angle_field(plane);
  CHECK(f.samples[0].cos_theta == doctest::Approx(1.0));
  CHECK(f.samples[0].t_norm <= 1e-15);
}

TEST_CASE("gradient identity for cos(theta)") {
  GradientIdentityConfig c{WarpingFunction::catalog("two-plus-cos")};
  const GradientIdentityReport r = gradient_identity_check(c);
  REQUIRE(r.orders.size() == 2);
  for (std::size_t k = 0; k + 1 < r.residuals.size(); ++k) CHECK(r.residuals[k + 1] < r.residuals[k]);
  for (double p : r.orders) CHECK(p >= 1.0);
  CHECK(r.max_cos > 0.1);

  // N a meridian: cos(theta) = 0 and both sides vanish.
  c.curve = "0.4";
  const GradientIdentityReport m = gradient_identity_check(c);
  for (double e : m.residuals) CHECK(e == 0.0);

  // H = 0 on a product.
  const double two[] = {2.0};
  GradientIdentityConfig flat{WarpingFunction::catalog("constant", two)};
  flat.curve = "0.2*t + 0.1*sin(2*t)";
  const GradientIdentityReport fr = gradient_identity_check(flat);
  for (double p : fr.orders) CHECK(p >= 1.0);
  CHECK(fr.residuals.back() < 1e-3);
}
