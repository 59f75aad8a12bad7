// SPDX-License-Identifier: Apache-2.0
#include "intersection_lab.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "error.hpp"

namespace warplab {

using fd::Mat;
using fd::Vec;

namespace {

// 8-point Gauss-Legendre nodes and weights on [-1, 1].
constexpr std::array<double, 8> kGlX = {-0.9602898564975363, -0.7966664774136267,
                                        -0.5255324099163290, -0.1834346424956498,
                                        0.1834346424956498,  0.5255324099163290,
                                        0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGlW = {0.1012285362903763, 0.2223810344533745,
                                        0.3137066458778873, 0.3626837833783620,
                                        0.3626837833783620, 0.3137066458778873,
                                        0.2223810344533745, 0.1012285362903763};

constexpr std::size_t kArclengthCells = 4096;

double speed(const WarpingFunction& wf, double t) {
  const double d = wf.eval(t).df;
  return std::sqrt(1.0 + d * d);
}

double gauss_legendre(const WarpingFunction& wf, double a, double b) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < kGlX.size(); ++i) s += kGlW[i] * speed(wf, mid + half * kGlX[i]);
  return half * s;
}

}  // namespace

fd::Vec default_direction(int n) {
  Vec phi = Vec::Zero(n);
  phi[0] = 1.0;
  return phi;
}

RotationHypersurface RotationHypersurface::from_warp(const WarpingFunction& wf, int ambient_dim) {
  if (ambient_dim < 3) fail(ErrorCode::InvalidArgument, "rotation hypersurfaces need ambient dimension >= 3");
  RotationHypersurface M;
  M.n_ = ambient_dim - 1;
  M.warp_ = wf;
  const Domain1D& d = wf.domain();
  M.t0_ = d.lower();
  M.dt_ = d.length() / static_cast<double>(kArclengthCells);
  M.period_ = d.is_circle() ? d.length() : 0.0;
  M.table_.assign(kArclengthCells + 1, 0.0);
  for (std::size_t k = 0; k < kArclengthCells; ++k) {
    const double a = M.t0_ + M.dt_ * static_cast<double>(k);
    M.table_[k + 1] = M.table_[k] + gauss_legendre(wf, a, a + M.dt_);
  }
  M.period_length_ = d.is_circle() ? M.table_.back() : 0.0;
  return M;
}

RotationHypersurface RotationHypersurface::sphere(double radius, int ambient_dim) {
  if (ambient_dim < 3) fail(ErrorCode::InvalidArgument, "rotation hypersurfaces need ambient dimension >= 3");
  if (!(radius > 0.0)) fail(ErrorCode::InvalidArgument, "sphere radius must be positive");
  RotationHypersurface M;
  M.n_ = ambient_dim - 1;
  M.sphere_radius_ = radius;
  return M;
}

double RotationHypersurface::arclength(double t) const {
  if (!warp_) return sphere_radius_ * t;
  double shift = 0.0;
  if (period_ > 0.0) {
    const double k = std::floor((t - t0_) / period_);
    t -= k * period_;
    shift = k * period_length_;
  } else {
    warp_->domain().reduce(t);
  }
  std::size_t j = static_cast<std::size_t>(std::floor((t - t0_) / dt_));
  j = std::min(j, kArclengthCells - 1);
  const double tj = t0_ + dt_ * static_cast<double>(j);
  return shift + table_[j] + gauss_legendre(*warp_, tj, t);
}

double RotationHypersurface::parameter(double s) const {
  if (!warp_) return s / sphere_radius_;
  double shift = 0.0;
  if (period_ > 0.0) {
    const double k = std::floor(s / period_length_);
    s -= k * period_length_;
    shift = k * period_;
  } else if (s < 0.0 || s > table_.back()) {
    fail(ErrorCode::DomainError, "arclength outside the profile");
  }
  auto it = std::upper_bound(table_.begin(), table_.end(), s);
  std::size_t j = it == table_.begin() ? 0 : static_cast<std::size_t>(it - table_.begin()) - 1;
  j = std::min(j, kArclengthCells - 1);
  double t = t0_ + dt_ * (static_cast<double>(j) + (s - table_[j]) / (table_[j + 1] - table_[j]));
  for (int it_n = 0; it_n < 8; ++it_n) {
    const double step = (arclength(t) - s) / speed(*warp_, t);
    t -= step;
    if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(t))) break;
  }
  return t + shift;
}

ProfilePoint RotationHypersurface::profile(double s) const {
  ProfilePoint p;
  if (!warp_) {
    const double R = sphere_radius_, a = s / R;
    const double c = std::cos(a), sn = std::sin(a);
    p.x = -R * c;
    p.dx = sn;
    p.ddx = c / R;
    p.r = R * sn;
    p.dr = c;
    p.ddr = -sn / R;
    return p;
  }
  const double t = parameter(s);
  const WarpSample w = warp_->eval(t);
  const double w2 = 1.0 + w.df * w.df, ww = std::sqrt(w2);
  p.x = t;
  p.dx = 1.0 / ww;
  p.ddx = -w.df * w.d2f / (w2 * w2);
  p.r = w.f;
  p.dr = w.df / ww;
  p.ddr = w.d2f / (w2 * w2);
  return p;
}

Vec RotationHypersurface::embed(double s, const Vec& Phi) const {
  const ProfilePoint p = profile(s);
  Vec x(n_ + 1);
  x[0] = p.x;
  x.tail(n_) = p.r * Phi;
  return x;
}

Vec RotationHypersurface::normal(double s, const Vec& Phi) const {
  const ProfilePoint p = profile(s);
  Vec x(n_ + 1);
  x[0] = -p.dr;
  x.tail(n_) = p.dx * Phi;
  return x;
}

Vec RotationHypersurface::meridian(double s, const Vec& Phi) const {
  const ProfilePoint p = profile(s);
  Vec x(n_ + 1);
  x[0] = p.dx;
  x.tail(n_) = p.dr * Phi;
  return x;
}

double RotationHypersurface::kappa_meridian(double s) const {
  const ProfilePoint p = profile(s);
  return -p.ddr * p.dx + p.ddx * p.dr;
}

double RotationHypersurface::kappa_parallel(double s) const {
  const ProfilePoint p = profile(s);
  return p.dx / p.r;
}

double RotationHypersurface::mean_curvature(double s) const {
  return (kappa_meridian(s) + (n_ - 1) * kappa_parallel(s)) / n_;
}

fd::Chart RotationHypersurface::chart(double s0, const Vec& Phi0) const {
  const Mat E = fd::complement(Phi0);
  return [this, s0, Phi0, E](const Vec& u) -> Vec {
    const Vec phi = (Phi0 + E * u.tail(u.size() - 1)).normalized();
    return embed(s0 + u[0], phi);
  };
}

namespace {

Vec axis_direction(const Vec& Phi) {
  Vec x = Vec::Zero(Phi.size() + 1);
  x.tail(Phi.size()) = Phi;
  return x;
}

Vec oriented(Vec v, const Vec& reference) {
  if (v.dot(reference) < 0.0) v = -v;
  return v;
}

}  // namespace

PrincipalCheck principal_curvature_check(const RotationHypersurface& M, double s, const Vec& Phi,
                                         const fd::Stencil& st) {
  PrincipalCheck c;
  c.kappa_meridian = M.kappa_meridian(s);
  c.kappa_parallel = M.kappa_parallel(s);
  const fd::Jet2 j = fd::derivatives(M.chart(s, Phi), Vec::Zero(M.n()), st);
  const Vec eta = oriented(fd::complement(j.tangents).col(0), axis_direction(Phi));
  const Mat b = -fd::second_form(j, eta);
  c.fd_meridian = b(0, 0) / j.metric(0, 0);
  double par = 0.0;
  for (int i = 1; i < M.n(); ++i) par += b(i, i) / j.metric(i, i);
  c.fd_parallel = par / (M.n() - 1);
  c.fd_mean = fd::shape_eigenvalues(j.metric, b).sum() / M.n();
  const Vec eta_exact = M.normal(s, Phi);
  for (int i = 0; i < M.n(); ++i)
    c.tangency_residual =
        std::max(c.tangency_residual, std::abs(eta_exact.dot(j.tangents.col(i))) /
                                          j.tangents.col(i).norm());
  c.max_error = std::max(std::abs(c.fd_meridian - c.kappa_meridian),
                         std::abs(c.fd_parallel - c.kappa_parallel));
  return c;
}

AngleReport intersection_angle(const RotationHypersurface& M, double t0, double tol,
                               const fd::Stencil& st) {
  const double s0 = M.arclength(t0);
  const ProfilePoint p = M.profile(s0);
  AngleReport a;
  // eta = (-r', x1' Phi), xi = e_1.
  a.phi = std::atan2(p.dx, -p.dr);
  if (std::sin(a.phi) <= tol)
    fail(ErrorCode::TangencyError, "M is tangent to the hyperplane at the chosen parallel");
  const Vec Phi = default_direction(M.n());
  const fd::Jet2 j = fd::derivatives(M.chart(s0, Phi), Vec::Zero(M.n()), st);
  const Vec eta = oriented(fd::complement(j.tangents).col(0), axis_direction(Phi));
  a.fd_phi = std::atan2(eta.tail(M.n()).norm(), eta[0]);
  return a;
}

namespace {

struct SliceFrames {
  fd::Jet2 sigma;  // derivatives of the parallel through Phi0
  Vec eta_star;    // unit normal of the parallel inside M, along increasing s
  Vec eta;
};

SliceFrames slice_frames(const RotationHypersurface& M, double s0, const Vec& Phi0,
                         const fd::Jet2& jm, const fd::Stencil& st, bool flip) {
  SliceFrames f;
  const Mat E = fd::complement(Phi0);
  const fd::Chart psi = [&M, s0, Phi0, E](const Vec& v) -> Vec {
    return M.embed(s0, (Phi0 + E * v).normalized());
  };
  f.sigma = fd::derivatives(psi, Vec::Zero(M.n() - 1), st);
  f.eta = oriented(fd::complement(jm.tangents).col(0), axis_direction(Phi0));
  if (flip) f.eta = -f.eta;
  const Mat tm = fd::projector(jm.tangents);
  const Mat ts = fd::projector(f.sigma.tangents);
  f.eta_star = oriented(((tm - ts) * jm.tangents.col(0)).normalized(), jm.tangents.col(0));
  return f;
}

}  // namespace

IntersectionReport decomposition_check(const RotationHypersurface& M, const CuttingHypersurface& N,
                                       double t0, const fd::Stencil& st, bool flip_orientation,
                                       double tol) {
  const int n = M.n();
  const double s0 = M.arclength(t0);
  const Vec Phi0 = default_direction(n);
  const Vec p = M.embed(s0, Phi0);
  const fd::Jet2 jm = fd::derivatives(M.chart(s0, Phi0), Vec::Zero(n), st);
  const SliceFrames sf = slice_frames(M, s0, Phi0, jm, st, flip_orientation);

  // Chart and outward unit normal of N at p.
  fd::Chart nchart;
  Vec xi_ref(n + 1);
  if (N.kind == CuttingHypersurface::Kind::Hyperplane) {
    nchart = [p](const Vec& u) -> Vec {
      Vec x = p;
      x.tail(u.size()) += u;
      return x;
    };
    xi_ref = Vec::Unit(n + 1, 0);
  } else {
    Vec c = Vec::Zero(n + 1);
    c[0] = N.center;
    const double R = (p - c).norm();
    nchart = fd::sphere_chart(c, R, p);
    xi_ref = p - c;
  }
  const fd::Jet2 jn = fd::derivatives(nchart, Vec::Zero(n), st);
  const Vec xi = oriented(fd::complement(jn.tangents).col(0), xi_ref);

  IntersectionReport r;
  r.cos_phi = std::clamp(sf.eta.dot(xi), -1.0, 1.0);
  r.sin_phi = std::sqrt(std::max(0.0, 1.0 - r.cos_phi * r.cos_phi));
  r.phi = std::atan2(r.sin_phi, r.cos_phi);
  if (r.sin_phi <= 1e-8)
    fail(ErrorCode::TangencyError, "M and N are tangent along the chosen parallel");

  // xi* = sigma J xi whenever eta* = sigma J eta, J a quarter turn of the
  // normal plane; the pair (xi*, xi) then has the orientation of (eta*, eta).
  const Mat Q = fd::complement(sf.sigma.tangents);
  auto quarter = [&Q](const Vec& v) -> Vec {
    const Eigen::Vector2d a = Q.transpose() * v;
    return Q * Eigen::Vector2d(-a[1], a[0]);
  };
  const Vec j_eta = quarter(sf.eta).normalized();
  const double orient = j_eta.dot(sf.eta_star) >= 0.0 ? 1.0 : -1.0;
  const Vec xi_star = orient * quarter(xi).normalized();

  const Mat identity = Mat::Identity(n + 1, n + 1);
  const Vec h_sigma_m = fd::mean_curvature(sf.sigma, sf.eta_star * sf.eta_star.transpose());
  const Vec h_sigma_n = fd::mean_curvature(sf.sigma, xi_star * xi_star.transpose());
  const Vec h_n = fd::mean_curvature(jn, identity - fd::projector(jn.tangents));
  const Mat tm = fd::projector(jm.tangents);
  r.vector_residual = (h_sigma_m - tm * h_sigma_n - tm * h_n).norm();

  r.h_sigma_m = h_sigma_m.dot(sf.eta_star);
  const ProfilePoint prof = M.profile(s0);
  r.h_sigma_m_closed = -prof.dr / prof.r;
  r.closed_form_error = std::abs(r.h_sigma_m - r.h_sigma_m_closed);
  r.h_sigma_n = h_sigma_n.dot(xi_star);
  r.h_n = h_n.dot(xi);
  r.residual_plus = std::abs(r.h_sigma_m - (r.h_sigma_n * r.cos_phi + r.h_n * r.sin_phi));
  r.residual_minus = std::abs(r.h_sigma_m - (r.h_sigma_n * r.cos_phi - r.h_n * r.sin_phi));
  r.decomposition_residual = std::min(r.residual_plus, r.residual_minus);
  const double scale = std::max({1.0, std::abs(r.h_sigma_m), std::abs(r.h_n)});
  const bool plus_ok = r.residual_plus <= tol * scale;
  const bool minus_ok = r.residual_minus <= tol * scale;
  r.sign = plus_ok == minus_ok ? 0 : (plus_ok ? 1 : -1);

  r.normal_verdict = std::abs(r.cos_phi) <= 1e-8;
  r.slice_form_norm = fd::form_norm(sf.sigma.metric, fd::second_form(sf.sigma, sf.eta_star));
  return r;
}

SliceGeodesity slice_geodesity(const RotationHypersurface& M, double t0, double tol,
                               const fd::Stencil& st) {
  const int n = M.n();
  const double s0 = M.arclength(t0);
  SliceGeodesity g;
  if (M.warp()) {
    const WarpSample w = M.warp()->eval(t0);
    g.warped_norm = std::abs(w.df) / w.f * std::sqrt(n - 1.0);
  } else {
    const ProfilePoint p = M.profile(s0);
    g.warped_norm = std::abs(p.dr) / p.r * std::sqrt(n - 1.0);
  }
  const Vec Phi0 = default_direction(n);
  const fd::Jet2 jm = fd::derivatives(M.chart(s0, Phi0), Vec::Zero(n), st);
  const SliceFrames sf = slice_frames(M, s0, Phi0, jm, st, false);
  g.embedded_norm = fd::form_norm(sf.sigma.metric, fd::second_form(sf.sigma, sf.eta_star));
  g.verdict = g.embedded_norm <= tol;
  return g;
}

CurveInWarpedSurface::CurveInWarpedSurface(WarpingFunction wf, std::vector<double> cos_coeffs,
                                           std::vector<double> sin_coeffs, double t_start,
                                           double beta_start, double length, double step)
    : wf_(std::move(wf)), a_(std::move(cos_coeffs)), b_(std::move(sin_coeffs)), length_(length),
      step_(step) {
  if (a_.empty()) a_.push_back(0.0);
  if (!(length > 0.0) || !(step > 0.0))
    fail(ErrorCode::InvalidArgument, "curve length and step must be positive");
  const std::size_t n = static_cast<std::size_t>(std::llround(length / step));
  step_ = length / static_cast<double>(n);
  t_.resize(n + 1);
  beta_.resize(n + 1);
  t_[0] = t_start;
  beta_[0] = beta_start;
  // Unit speed in dt^2 + f(t)^2 dbeta^2: t' = cos alpha, beta' = sin alpha / f.
  auto rhs = [this](double sigma, double t, double& dt, double& db) {
    const double a = alpha(sigma);
    dt = std::cos(a);
    db = std::sin(a) / wf_.eval(t).f;
  };
  for (std::size_t i = 0; i < n; ++i) {
    const double s = step_ * static_cast<double>(i), h = step_;
    double k1t, k1b, k2t, k2b, k3t, k3b, k4t, k4b;
    rhs(s, t_[i], k1t, k1b);
    rhs(s + 0.5 * h, t_[i] + 0.5 * h * k1t, k2t, k2b);
    rhs(s + 0.5 * h, t_[i] + 0.5 * h * k2t, k3t, k3b);
    rhs(s + h, t_[i] + h * k3t, k4t, k4b);
    t_[i + 1] = t_[i] + h / 6 * (k1t + 2 * k2t + 2 * k3t + k4t);
    beta_[i + 1] = beta_[i] + h / 6 * (k1b + 2 * k2b + 2 * k3b + k4b);
  }
}

CurveInWarpedSurface CurveInWarpedSurface::random(const WarpingFunction& wf, std::uint64_t seed,
                                                  double length) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> a{std::numbers::pi * unit(rng)}, b{0.0};
  for (int k = 1; k <= 3; ++k) {
    a.push_back(unit(rng) / k);
    b.push_back(unit(rng) / k);
  }
  const Domain1D& d = wf.domain();
  const double lo = d.is_circle() ? d.lower() : d.lower() + length;
  const double hi = d.is_circle() ? d.upper() : d.upper() - length;
  if (!(lo < hi)) fail(ErrorCode::InvalidArgument, "warp domain too short for a random curve");
  const double t0 = lo + (hi - lo) * 0.5 * (unit(rng) + 1.0);
  return CurveInWarpedSurface(wf, a, b, t0, 0.0, length);
}

double CurveInWarpedSurface::alpha(double sigma) const {
  double v = a_[0];
  for (std::size_t k = 1; k < a_.size(); ++k) v += a_[k] * std::cos(k * sigma);
  for (std::size_t k = 1; k < b_.size(); ++k) v += b_[k] * std::sin(k * sigma);
  return v;
}

double CurveInWarpedSurface::alpha_prime(double sigma) const {
  double v = 0.0;
  for (std::size_t k = 1; k < a_.size(); ++k) v -= k * a_[k] * std::sin(k * sigma);
  for (std::size_t k = 1; k < b_.size(); ++k) v += k * b_[k] * std::cos(k * sigma);
  return v;
}

HeightLaplacianReport height_laplacian_check(const CurveInWarpedSurface& c,
                                             const std::vector<double>& steps) {
  HeightLaplacianReport rep;
  const double hmax = *std::max_element(steps.begin(), steps.end());
  const std::size_t N = c.size() - 1;
  const double ds = c.step();
  const std::size_t margin = static_cast<std::size_t>(std::llround(2.0 * hmax / ds)) + 1;
  if (2 * margin >= N) fail(ErrorCode::InvalidArgument, "curve too short for the FD steps");
  const WarpingFunction& wf = c.warp();

  for (double h : steps) {
    const std::size_t m = static_cast<std::size_t>(std::llround(h / ds));
    if (m == 0 || std::abs(static_cast<double>(m) * ds - h) > 1e-9)
      fail(ErrorCode::InvalidArgument, "FD step must be a multiple of the curve step");
    const double hh = static_cast<double>(m) * ds;
    // Angle with d_t from FD velocities: cos alpha = t', sin alpha = f beta'.
    auto angle = [&](std::size_t i) {
      const double tp = (c.height(i + m) - c.height(i - m)) / (2 * hh);
      const double bp = (c.beta(i + m) - c.beta(i - m)) / (2 * hh);
      return std::atan2(wf.eval(c.height(i)).f * bp, tp);
    };
    double worst = 0.0;
    for (std::size_t i = margin; i + margin <= N; i += 10) {
      const double t = c.height(i);
      const double lap = (c.height(i + m) - 2 * t + c.height(i - m)) / (hh * hh);
      const double tp = (c.height(i + m) - c.height(i - m)) / (2 * hh);
      const double H = wf.mean_curvature(t);
      const double a = angle(i);
      double da = angle(i + m) - angle(i - m);
      da = std::remainder(da, 2 * std::numbers::pi) / (2 * hh);
      // Geodesic curvature vector (alpha' + H sin alpha) nu, nu = -sin alpha d_t + cos alpha e_beta.
      const double dt_dot_curvature = -std::sin(a) * (da + H * std::sin(a));
      const double rhs = H * (1.0 - tp * tp) + dt_dot_curvature;
      worst = std::max(worst, std::abs(lap - rhs));
    }
    rep.steps.push_back({hh, worst});
  }
  for (std::size_t k = 0; k + 1 < rep.steps.size(); ++k) {
    const double e0 = rep.steps[k].max_residual, e1 = rep.steps[k + 1].max_residual;
    if (e0 > 1e-13 && e1 > 1e-13)
      rep.orders.push_back(std::log2(e0 / e1) / std::log2(rep.steps[k].h / rep.steps[k + 1].h));
  }
  return rep;
}

double witness_laplacian(int n, double rho) {
  if (n < 3) fail(ErrorCode::InvalidArgument, "parabolicity witness needs n >= 3");
  const double p = 0.5 * (n - 2);
  const double b = 1.0 + rho * rho;
  const double u2 = -2 * p * std::pow(b, -p - 1) + 4 * p * (p + 1) * rho * rho * std::pow(b, -p - 2);
  if (rho == 0.0) return n * u2;
  const double u1 = -2 * p * rho * std::pow(b, -p - 1);
  return u2 + (n - 1) * u1 / rho;
}

double parabolicity_witness(int n, std::size_t samples, std::uint64_t seed, double radius) {
  if (n < 3) fail(ErrorCode::InvalidArgument, "parabolicity witness needs n >= 3");
  // Uniform points in the ball; only |x| enters the radial formula.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = witness_laplacian(n, 0.0);
  for (std::size_t k = 0; k < samples; ++k)
    worst = std::max(worst, witness_laplacian(n, radius * std::pow(unit(rng), 1.0 / n)));
  return worst;
}

}  // namespace warplab
