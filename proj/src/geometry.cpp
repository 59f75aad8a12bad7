// SPDX-License-Identifier: Apache-2.0
#include "geometry.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "error.hpp"

namespace warplab {

namespace {

const char* const kTorusVars[] = {"t1", "t2", "t3", "t4"};

double binomial(int n, int k) {
  if (k < 0 || n < k) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

ScalarFieldM ScalarFieldM::from_expression(std::string_view expr, std::vector<double> periods) {
  if (periods.empty() || periods.size() > kMaxBaseDim)
    fail(ErrorCode::InvalidArgument, "torus base dimension must be between 1 and 4");
  for (double L : periods)
    if (!(L > 0.0)) fail(ErrorCode::InvalidArgument, "torus periods must be positive");
  std::vector<std::string> vars(kTorusVars, kTorusVars + periods.size());
  ScalarFieldM field(Expression::parse(expr, std::move(vars)), std::move(periods));

  // Positivity on a tensor grid, periodicity at random points.
  const std::size_t m = field.dim();
  const std::size_t per_axis = m == 1 ? 1024 : (m == 2 ? 32 : 8);
  std::size_t total = 1;
  for (std::size_t i = 0; i < m; ++i) total *= per_axis;
  std::vector<double> x(m);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (std::size_t i = 0; i < m; ++i) {
      x[i] = field.periods_[i] * static_cast<double>(rest % per_axis) / per_axis;
      rest /= per_axis;
    }
    if (!(field.value(x) > 0.0))
      fail(ErrorCode::NonPositiveWarp, "field '" + std::string(expr) + "' is not positive");
  }
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 64; ++k) {
    for (std::size_t i = 0; i < m; ++i) x[i] = u(rng) * field.periods_[i];
    const Jet4 a = field.jet(x);
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<double> y = x;
      y[i] += field.periods_[i];
      const Jet4 b = field.jet(y);
      if (std::abs(a.value - b.value) > 1e-12 * std::max(1.0, std::abs(a.value)))
        fail(ErrorCode::InvalidArgument, "field '" + std::string(expr) + "' is not periodic");
    }
  }
  return field;
}

Jet4 ScalarFieldM::jet(std::span<const double> x) const {
  if (x.size() < dim()) fail(ErrorCode::InvalidArgument, "point has too few coordinates");
  std::array<Jet4, kMaxBaseDim> in;
  for (std::size_t i = 0; i < dim(); ++i) in[i] = Jet4::variable(x[i], i);
  return expr_.evaluate<Jet4>(std::span<const Jet4>(in.data(), dim()));
}

double sphere_volume(int q, double radius) {
  const double a = 0.5 * (q + 1);
  return 2.0 * std::pow(std::numbers::pi, a) / std::tgamma(a) * std::pow(radius, q);
}

FiberDescriptor FiberDescriptor::sphere(int q, double radius, int levels) {
  if (q < 1) fail(ErrorCode::InvalidArgument, "sphere fiber needs q >= 1");
  if (!(radius > 0.0)) fail(ErrorCode::InvalidArgument, "sphere radius must be positive");
  FiberDescriptor d;
  d.kind = Kind::Sphere;
  d.q = q;
  d.radius = radius;
  d.volume = sphere_volume(q, radius);
  for (int k = 0; k <= levels; ++k) {
    const double mult = binomial(k + q, q) - binomial(k + q - 2, q);
    d.spectrum.emplace_back(k * (k + q - 1.0) / (radius * radius), static_cast<int>(mult));
  }
  return d;
}

FiberDescriptor FiberDescriptor::circle(double radius, int levels) {
  if (!(radius > 0.0)) fail(ErrorCode::InvalidArgument, "circle radius must be positive");
  FiberDescriptor d;
  d.kind = Kind::Circle;
  d.q = 1;
  d.radius = radius;
  d.volume = 2.0 * std::numbers::pi * radius;
  for (int k = 0; k <= levels; ++k) d.spectrum.emplace_back((k / radius) * (k / radius), k == 0 ? 1 : 2);
  return d;
}

FiberDescriptor FiberDescriptor::abstract(int q, double volume,
                                          std::vector<std::pair<double, int>> spectrum) {
  if (q < 1) fail(ErrorCode::InvalidArgument, "fiber dimension must be >= 1");
  if (!(volume > 0.0)) fail(ErrorCode::InvalidArgument, "fiber volume must be positive");
  FiberDescriptor d;
  d.kind = Kind::Abstract;
  d.q = q;
  d.volume = volume;
  d.spectrum = std::move(spectrum);
  return d;
}

double BaseJet::laplacian() const {
  double s = 0.0;
  for (std::size_t i = 0; i < m; ++i) s += hess_at(i, i);
  return s;
}

double BaseJet::grad_norm2() const {
  double s = 0.0;
  for (std::size_t i = 0; i < m; ++i) s += grad[i] * grad[i];
  return s;
}

WarpedProductSpace::WarpedProductSpace(WarpingFunction warp, FiberDescriptor fiber)
    : warp_(std::move(warp)), fiber_(std::move(fiber)) {}

WarpedProductSpace::WarpedProductSpace(ScalarFieldM field, FiberDescriptor fiber)
    : field_(std::move(field)), fiber_(std::move(fiber)) {}

bool WarpedProductSpace::compact_base() const {
  return field_ ? true : warp_->domain().is_circle();
}

std::vector<double> WarpedProductSpace::base_lower() const {
  if (field_) return std::vector<double>(field_->dim(), 0.0);
  return {warp_->domain().lower()};
}

std::vector<double> WarpedProductSpace::base_lengths() const {
  if (field_) return field_->periods();
  return {warp_->domain().length()};
}

BaseJet WarpedProductSpace::base_jet(std::span<const double> x) const {
  BaseJet b;
  b.m = base_dim();
  if (warp_) {
    if (x.empty()) fail(ErrorCode::InvalidArgument, "missing base coordinate");
    const WarpSample s = warp_->eval(x[0]);
    b.f = s.f;
    b.grad[0] = s.df;
    b.hess[0] = s.d2f;
    return b;
  }
  const Jet4 j = field_->jet(x);
  if (!(j.value > 0.0)) fail(ErrorCode::NonPositiveWarp, "warp is not positive");
  b.f = j.value;
  b.grad = j.grad;
  for (std::size_t i = 0; i < kMaxBaseDim * kMaxBaseDim; ++i) b.hess[i] = j.hess[i];
  return b;
}

double ricci_horizontal(const WarpedProductSpace& space, std::span<const double> x,
                        std::span<const double> X, std::span<const double> Y) {
  const BaseJet b = space.base_jet(x);
  if (X.size() < b.m || Y.size() < b.m)
    fail(ErrorCode::InvalidArgument, "tangent vectors must have one entry per base dimension");
  double hxy = 0.0;
  for (std::size_t i = 0; i < b.m; ++i)
    for (std::size_t k = 0; k < b.m; ++k) hxy += X[i] * b.hess_at(i, k) * Y[k];
  return -(space.q() / b.f) * hxy;
}

double ricci_dt_dt(const WarpedProductSpace& space, double t) {
  if (space.base_dim() != 1) fail(ErrorCode::InvalidArgument, "ricci_dt_dt needs a 1-dimensional base");
  const double x[] = {t}, e[] = {1.0};
  return ricci_horizontal(space, x, e, e);
}

double volume_element(const WarpedProductSpace& space, std::span<const double> x) {
  return std::pow(space.base_jet(x).f, space.q());
}

double volume_element(const WarpedProductSpace& space, double t) {
  const double x[] = {t};
  return volume_element(space, x);
}

double SplitVector::norm() const {
  double s = base * base;
  for (double v : fiber) s += v * v;
  return std::sqrt(s);
}

SplitVector covariant_dt(const WarpedProductSpace& space, double t, const SplitVector& X) {
  if (space.base_dim() != 1) fail(ErrorCode::InvalidArgument, "covariant_dt needs a 1-dimensional base");
  const double h = space.warp()->mean_curvature(t);
  SplitVector r;
  r.base = 0.0;
  r.fiber.resize(X.fiber.size());
  for (std::size_t i = 0; i < X.fiber.size(); ++i) r.fiber[i] = h * X.fiber[i];
  return r;
}

double log_warp_identity_residual(const WarpedProductSpace& space, std::span<const double> x) {
  const double q = space.q();
  const std::size_t m = space.base_dim();
  double lap_u = 0.0, grad_u2 = 0.0;
  if (space.warp()) {
    const Dual2 u = log(space.warp()->jet(x[0]));
    lap_u = u.hess[0];
    grad_u2 = u.grad[0] * u.grad[0];
  } else {
    const Jet4 u = log(space.field()->jet(x));
    for (std::size_t i = 0; i < m; ++i) {
      lap_u += u.dd(i, i);
      grad_u2 += u.grad[i] * u.grad[i];
    }
  }
  // Warped Laplacian of the base function u = ln f.
  const double warped_lap = lap_u + q * grad_u2;
  double ric_sum = 0.0;
  std::array<double, kMaxBaseDim> e{};
  for (std::size_t k = 0; k < m; ++k) {
    e.fill(0.0);
    e[k] = 1.0;
    ric_sum += ricci_horizontal(space, x, std::span<const double>(e.data(), m),
                                std::span<const double>(e.data(), m));
  }
  // |grad ln f|^2 is |H|^2 of the slices.
  return std::abs(q * warped_lap + ric_sum - q * (q - 1.0) * grad_u2);
}

double log_warp_identity_residual(const WarpedProductSpace& space, double t) {
  const double x[] = {t};
  return log_warp_identity_residual(space, x);
}

}  // namespace warplab
