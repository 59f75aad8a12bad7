// SPDX-License-Identifier: Apache-2.0
#include "spectral_lab.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "error.hpp"
#include "expr.hpp"

namespace warplab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Parameters t in [lo, hi] where g changes sign, refined by bisection.
std::vector<double> sign_changes(const std::function<double(double)>& g, double lo, double hi,
                                 std::size_t cells = 4096) {
  std::vector<double> roots;
  const double dt = (hi - lo) / static_cast<double>(cells);
  double a = lo, ga = g(a);
  for (std::size_t k = 1; k <= cells; ++k) {
    const double b = lo + dt * static_cast<double>(k);
    const double gb = g(b);
    if (ga == 0.0) {
      roots.push_back(a);
    } else if (ga * gb < 0) {
      double x0 = a, x1 = b, g0 = ga;
      for (int it = 0; it < 200 && x1 - x0 > 1e-15 * (1 + std::abs(x0)); ++it) {
        const double mid = 0.5 * (x0 + x1), gm = g(mid);
        if (gm == 0.0) {
          x0 = x1 = mid;
          break;
        }
        if ((gm < 0) == (g0 < 0)) {
          x0 = mid;
          g0 = gm;
        } else {
          x1 = mid;
        }
      }
      roots.push_back(0.5 * (x0 + x1));
    }
    a = b;
    ga = gb;
  }
  return roots;
}

SigmaSample sigma_sample(const Theorem3Config& c, double t) {
  const WarpSample w = c.wf.eval(t);
  const double wn = std::sqrt(1.0 + w.df * w.df);
  // Meridian plane coordinates (x1, r).
  const double dt[2] = {1.0 / wn, w.df / wn};
  double xi[2], shape_scale;
  if (c.cut == Theorem3Config::Cut::Sphere) {
    xi[0] = (t - c.center) / c.radius;
    xi[1] = w.f / c.radius;
    shape_scale = 1.0 / c.radius;  // A = -(1/R) Id for the outward normal
  } else {
    xi[0] = 1.0;
    xi[1] = 0.0;
    shape_scale = 0.0;
  }
  SigmaSample s;
  s.t = t;
  s.length = kTwoPi * w.f;
  s.cos_theta = dt[0] * xi[0] + dt[1] * xi[1];
  s.sin_theta = std::sqrt(std::max(0.0, 1.0 - s.cos_theta * s.cos_theta));
  const double T[2] = {dt[0] - s.cos_theta * xi[0], dt[1] - s.cos_theta * xi[1]};
  s.t_norm = std::hypot(T[0], T[1]);
  s.shape_norm = shape_scale * s.t_norm;
  s.mean_curvature = w.df / (w.f * wn);
  return s;
}

}  // namespace

std::vector<std::pair<double, int>> slice_spectrum(const FiberDescriptor& P, const WarpingFunction& wf,
                                                   double t, std::size_t k) {
  if (P.spectrum.empty()) fail(ErrorCode::MissingSpectrum, "fiber has no tabulated spectrum");
  const double f = wf.eval(t).f;
  std::vector<std::pair<double, int>> out;
  for (const auto& [lambda, mult] : P.spectrum) {
    if (out.size() == k) break;
    if (lambda <= 0.0) continue;
    out.emplace_back(lambda / (f * f), mult);
  }
  if (out.size() < k) fail(ErrorCode::MissingSpectrum, "fiber spectrum has fewer than k nonzero levels");
  return out;
}

AngleField angle_field(const Theorem3Config& c) {
  AngleField field;
  std::vector<double> ts;
  if (c.cut == Theorem3Config::Cut::Plane) {
    ts.push_back(c.plane_t);
  } else {
    if (!(c.radius > 0)) fail(ErrorCode::InvalidArgument, "sphere radius must be positive");
    double lo = c.center - c.radius, hi = c.center + c.radius;
    if (!c.wf.domain().is_circle()) {
      lo = std::max(lo, c.wf.domain().lower());
      hi = std::min(hi, c.wf.domain().upper());
    }
    ts = sign_changes(
        [&](double t) {
          const double f = c.wf.eval(t).f;
          return (t - c.center) * (t - c.center) + f * f - c.radius * c.radius;
        },
        lo, hi);
  }
  for (double t : ts) {
    const SigmaSample s = sigma_sample(c, t);
    field.unit_residual =
        std::max(field.unit_residual, std::abs(s.t_norm * s.t_norm + s.cos_theta * s.cos_theta - 1.0));
    field.samples.push_back(s);
  }
  return field;
}

Theorem3Report theorem3_bound(const Theorem3Config& c) {
  Theorem3Report rep;
  rep.field = angle_field(c);
  if (rep.field.samples.empty()) fail(ErrorCode::DegenerateTestFunction, "N does not meet M: Sigma is empty");
  for (const SigmaSample& s : rep.field.samples) {
    rep.shape_term += 2.0 * s.shape_norm * s.shape_norm * s.length;
    rep.curvature_term += 2.0 * s.mean_curvature * s.mean_curvature * s.cos_theta * s.cos_theta *
                          s.sin_theta * s.sin_theta * s.length;
    rep.denominator += s.cos_theta * s.cos_theta * s.length;
  }
  if (rep.denominator <= c.tol)
    fail(ErrorCode::DegenerateTestFunction, "cos(theta) vanishes on Sigma");
  if (rep.shape_term + rep.curvature_term <= c.tol)
    fail(ErrorCode::DegenerateTestFunction, "T vanishes on Sigma; the test function carries no gradient data");
  if (c.cut != Theorem3Config::Cut::Sphere)
    fail(ErrorCode::InvalidArgument, "only a compact (sphere) cut has a first eigenvalue");
  rep.bound = (rep.shape_term + rep.curvature_term) / rep.denominator;

  const double R = c.radius;
  const DiscreteLaplacian mesh =
      DiscreteLaplacian::revolution(RevolutionProfile::sphere(R), c.ns, c.nbeta, EdgeKind::Pole, EdgeKind::Pole);
  rep.lambda1 = lowest_eigenpairs(mesh, 1, c.eigen).front().lambda;
  rep.lambda1_exact = 2.0 / (R * R);
  rep.margin = rep.bound - rep.lambda1;

  // cos(theta) on the rings of N nearest each parallel, zero elsewhere. On N,
  // arclength from the pole at x1 = center - R is R acos((center - x1) / R).
  Vector phi = Vector::Zero(static_cast<Eigen::Index>(mesh.size()));
  for (const SigmaSample& s : rep.field.samples) {
    const double arc = R * std::acos(std::clamp((c.center - s.t) / R, -1.0, 1.0));
    for (std::size_t i = 0; i <= mesh.ns(); ++i) {
      const double d = std::abs(mesh.s_at(i) - arc);
      double weight;
      if (c.mollify > 0) {
        weight = std::max(0.0, 1.0 - d / c.mollify);
      } else {
        weight = static_cast<std::size_t>(std::lround(arc / mesh.hs())) == i ? 1.0 : 0.0;
      }
      if (weight == 0.0) continue;
      for (std::size_t j = 0; j < (mesh.pole_ring(i) ? 1 : mesh.nbeta()); ++j)
        phi[static_cast<Eigen::Index>(mesh.node(i, j))] += weight * s.cos_theta;
    }
  }
  const Vector& M = mesh.mass();
  const SparseMatrix& K = mesh.stiffness();
  rep.rayleigh_lhs = rep.lambda1 * phi.dot(M.cwiseProduct(phi));
  rep.rayleigh_rhs = phi.dot(K * phi);
  const Vector centered = phi.array() - M.dot(phi) / M.sum();
  rep.centered_lhs = rep.lambda1 * centered.dot(M.cwiseProduct(centered));
  rep.centered_rhs = centered.dot(K * centered);
  const double slack = 1e-12 * (1.0 + rep.rayleigh_rhs);
  rep.rayleigh_ok = rep.rayleigh_lhs <= rep.rayleigh_rhs + slack &&
                    rep.centered_lhs <= rep.centered_rhs + slack;
  return rep;
}

GradientIdentityReport gradient_identity_check(const GradientIdentityConfig& c) {
  if (c.samples == 0 || !(c.t_hi > c.t_lo)) fail(ErrorCode::InvalidArgument, "empty sample window");
  const Expression b = Expression::parse(c.curve, {"t"});
  auto db = [&](double t) {
    const Dual2 x = Dual2::variable(t, 0);
    const Dual2 y = b.evaluate<Dual2>(std::span<const Dual2>(&x, 1));
    return std::pair<double, double>{y.d(0), y.dd(0, 0)};
  };
  auto cos_theta = [&](double t) {
    const double r = c.wf.eval(t).f, b1 = db(t).first;
    return -r * b1 / std::sqrt(1.0 + r * r * b1 * b1);
  };

  GradientIdentityReport rep;
  rep.steps = c.steps;
  for (double h : c.steps) {
    double worst = 0.0;
    for (std::size_t i = 0; i < c.samples; ++i) {
      const double t = c.t_lo + (c.t_hi - c.t_lo) * (static_cast<double>(i) + 0.5) / static_cast<double>(c.samples);
      const WarpSample w = c.wf.eval(t);
      const auto [b1, b2] = db(t);
      const double v = std::sqrt(1.0 + w.f * w.f * b1 * b1);
      // Derivative along the unit tangent e = (d_t + b' d_beta) / v.
      const double lhs = (cos_theta(t + h) - cos_theta(t - h)) / (2.0 * h) / v;
      // Geodesic curvature <nabla_e e, xi> from the Christoffel symbols
      // Gamma^t_bb = -r r', Gamma^b_tb = r'/r.
      const double kappa = (w.f * w.f * w.df * b1 * b1 * b1 + w.f * b2 + 2.0 * w.df * b1) / (v * v * v);
      const double tangent = 1.0 / v;  // <T, e>
      const double H = w.df / w.f;
      const double ct = -w.f * b1 / v;
      const double rhs = -kappa * tangent - H * ct * tangent;
      worst = std::max(worst, std::abs(lhs - rhs));
      rep.max_cos = std::max(rep.max_cos, std::abs(ct));
    }
    rep.residuals.push_back(worst);
  }
  for (std::size_t k = 0; k + 1 < rep.residuals.size(); ++k)
    rep.orders.push_back(std::log2(rep.residuals[k] / rep.residuals[k + 1]));
  return rep;
}

}  // namespace warplab
