// SPDX-License-Identifier: Apache-2.0
#include "warp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "error.hpp"
#include "expr.hpp"

namespace warplab {

Domain1D Domain1D::interval(double a, double b) {
  if (!(a < b)) fail(ErrorCode::InvalidArgument, "interval domain requires a < b");
  return Domain1D(Kind::Interval, a, b);
}

Domain1D Domain1D::circle(double period) {
  if (!(period > 0.0)) fail(ErrorCode::InvalidArgument, "circle domain requires L > 0");
  return Domain1D(Kind::Circle, 0.0, period);
}

bool Domain1D::contains(double t) const {
  if (is_circle()) return std::isfinite(t);
  return t >= a_ && t <= b_;
}

double Domain1D::reduce(double t) const {
  if (!std::isfinite(t)) fail(ErrorCode::DomainError, "non-finite abscissa");
  if (is_circle()) {
    const double L = b_;
    double r = std::fmod(t, L);
    if (r < 0.0) r += L;
    return r;
  }
  if (t < a_ || t > b_) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "t = %.17g outside [%.17g, %.17g]", t, a_, b_);
    fail(ErrorCode::DomainError, buf);
  }
  return t;
}

struct WarpingFunction::Model {
  Domain1D domain;
  std::string name;

  Model(Domain1D d, std::string n) : domain(d), name(std::move(n)) {}
  virtual ~Model() = default;
  virtual Dual2 raw(double t) const = 0;
  virtual bool constant() const { return false; }
  virtual double error_estimate() const { return 0.0; }
};

namespace {

class ExpressionModel final : public WarpingFunction::Model {
 public:
  ExpressionModel(Expression e, Domain1D d, std::string n)
      : Model(d, std::move(n)), expr_(std::move(e)) {}

  Dual2 raw(double t) const override {
    const Dual2 x = Dual2::variable(t, 0);
    return expr_.evaluate<Dual2>(std::span<const Dual2>(&x, 1));
  }

  bool constant() const override { return expr_.is_constant(); }

 private:
  Expression expr_;
};

class SchwarzschildModel final : public WarpingFunction::Model {
 public:
  explicit SchwarzschildModel(const SchwarzschildParams& p)
      : Model(Domain1D::interval(0.0, p.tmax), "schwarzschild"), p_(p) {
    if (!(p.mass >= 0.0)) fail(ErrorCode::InvalidArgument, "schwarzschild: m must be >= 0");
    if (p.exponent < 1) fail(ErrorCode::InvalidArgument, "schwarzschild: q must be >= 1");
    if (!(p.r0 > 0.0)) fail(ErrorCode::InvalidArgument, "schwarzschild: r0 must be > 0");
    if (!(p.step > 0.0)) fail(ErrorCode::InvalidArgument, "schwarzschild: step must be > 0");
    if (!(p.tmax > 0.0)) fail(ErrorCode::InvalidArgument, "schwarzschild: tmax must be > 0");

    const std::size_t n = static_cast<std::size_t>(std::ceil(p.tmax / p.step));
    h_ = p.tmax / static_cast<double>(n);
    table_ = integrate(n);
    const std::vector<double> fine = integrate(2 * n);
    error_ = std::abs(fine.back() - table_.back()) / 15.0;
    if (error_ > 1e-8 * std::max(1.0, table_.back()))
      fail(ErrorCode::NonConvergence, "schwarzschild: step too coarse (Richardson check)");
  }

  Dual2 raw(double t) const override {
    const double f = interpolate(t);
    Dual2 r;
    r.value = f;
    r.grad[0] = slope(f);
    r.hess[0] = curvature(f);
    return r;
  }

  double error_estimate() const override { return error_; }

 private:
  double slope(double f) const {
    const double g = 1.0 - 2.0 * p_.mass / std::pow(f, p_.exponent);
    if (!(g > 0.0)) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "schwarzschild: 1 - 2m/f^q = %.6g <= 0 at f = %.17g", g, f);
      fail(ErrorCode::HorizonError, buf);
    }
    return std::sqrt(g);
  }

  // d/dt sqrt(1 - 2m f^-q) = m q f^(-q-1); the f' factor cancels.
  double curvature(double f) const {
    return p_.mass * p_.exponent * std::pow(f, -p_.exponent - 1);
  }

  std::vector<double> integrate(std::size_t n) const {
    const double h = p_.tmax / static_cast<double>(n);
    std::vector<double> f(n + 1);
    f[0] = p_.r0;
    slope(p_.r0);
    for (std::size_t k = 0; k < n; ++k) {
      const double y = f[k];
      const double k1 = slope(y);
      const double k2 = slope(y + 0.5 * h * k1);
      const double k3 = slope(y + 0.5 * h * k2);
      const double k4 = slope(y + h * k3);
      f[k + 1] = y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return f;
  }

  // Quintic Hermite interpolation from (f, f', f'') at both ends of the cell.
  double interpolate(double t) const {
    const std::size_t n = table_.size() - 1;
    std::size_t k = static_cast<std::size_t>(std::floor(t / h_));
    if (k >= n) k = n - 1;
    const double t0 = static_cast<double>(k) * h_;
    const double s = (t - t0) / h_;
    const double y0 = table_[k], y1 = table_[k + 1];
    const double d0 = slope(y0) * h_, d1 = slope(y1) * h_;
    const double c0 = curvature(y0) * h_ * h_, c1 = curvature(y1) * h_ * h_;
    const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
    const double h00 = 1 - 10 * s3 + 15 * s4 - 6 * s5;
    const double h01 = 10 * s3 - 15 * s4 + 6 * s5;
    const double h10 = s - 6 * s3 + 8 * s4 - 3 * s5;
    const double h11 = -4 * s3 + 7 * s4 - 3 * s5;
    const double h20 = 0.5 * (s2 - 3 * s3 + 3 * s4 - s5);
    const double h21 = 0.5 * (s3 - 2 * s4 + s5);
    return h00 * y0 + h01 * y1 + h10 * d0 + h11 * d1 + h20 * c0 + h21 * c1;
  }

  SchwarzschildParams p_;
  double h_ = 0.0;
  double error_ = 0.0;
  std::vector<double> table_;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double param(std::span<const double> params, std::size_t i, double fallback) {
  return i < params.size() ? params[i] : fallback;
}

}  // namespace

WarpingFunction::WarpingFunction(std::shared_ptr<const Model> model) : model_(std::move(model)) {
  validate();
}

WarpingFunction WarpingFunction::from_expression(std::string_view expr, Domain1D domain,
                                                 std::string name) {
  Expression e = Expression::parse(expr, {"t"});
  if (name.empty()) name = std::string(expr);
  return WarpingFunction(std::make_shared<ExpressionModel>(std::move(e), domain, std::move(name)));
}

WarpingFunction WarpingFunction::catalog(std::string_view name, std::span<const double> params,
                                         std::optional<Domain1D> domain) {
  const double two_pi = 2.0 * std::numbers::pi;
  if (name == "constant") {
    const double c = param(params, 0, 1.0);
    return from_expression(fmt(c), domain.value_or(Domain1D::circle(two_pi)), "constant");
  }
  if (name == "two-plus-cos") {
    return from_expression("2 + cos(t)", domain.value_or(Domain1D::circle(two_pi)),
                           "two-plus-cos");
  }
  if (name == "cosh") {
    return from_expression("cosh(t)", domain.value_or(Domain1D::interval(-3.0, 3.0)), "cosh");
  }
  if (name == "affine") {
    const double a = param(params, 0, 1.0), b = param(params, 1, 1.0);
    return from_expression(fmt(a) + " + " + fmt(b) + " * t",
                           domain.value_or(Domain1D::interval(0.0, 1.0)), "affine");
  }
  if (name == "schwarzschild") {
    SchwarzschildParams p;
    p.mass = param(params, 0, p.mass);
    p.exponent = static_cast<int>(param(params, 1, p.exponent));
    p.r0 = param(params, 2, p.r0);
    p.tmax = param(params, 3, p.tmax);
    p.step = param(params, 4, p.step);
    return schwarzschild(p);
  }
  fail(ErrorCode::InvalidArgument, "unknown catalog warp '" + std::string(name) + "'");
}

WarpingFunction WarpingFunction::schwarzschild(const SchwarzschildParams& params) {
  return WarpingFunction(std::make_shared<SchwarzschildModel>(params));
}

void WarpingFunction::validate() const {
  const Domain1D& d = model_->domain;
  // Positivity on a dense grid; evaluation rejects f <= 0 again later.
  for (double t : sample_points(1024)) {
    const double f = model_->raw(t).value;
    if (!(f > 0.0)) {
      fail(ErrorCode::NonPositiveWarp,
           "warp '" + model_->name + "' is not positive at t = " + fmt(t));
    }
  }
  if (d.is_circle()) {
    const double L = d.length();
    for (int k = 0; k < 64; ++k) {
      const double t = L * (k + 0.5) / 64.0;
      const Dual2 a = model_->raw(t), b = model_->raw(t + L);
      const double scale = std::max({1.0, std::abs(a.value), std::abs(a.grad[0]), std::abs(a.hess[0])});
      if (std::abs(a.value - b.value) > 1e-12 * scale ||
          std::abs(a.grad[0] - b.grad[0]) > 1e-12 * scale ||
          std::abs(a.hess[0] - b.hess[0]) > 1e-12 * scale) {
        fail(ErrorCode::InvalidArgument,
             "warp '" + model_->name + "' is not periodic with period " + fmt(L));
      }
    }
  }
}

Dual2 WarpingFunction::jet(double t) const {
  const Dual2 j = model_->raw(model_->domain.reduce(t));
  if (!(j.value > 0.0))
    fail(ErrorCode::NonPositiveWarp, "warp '" + model_->name + "' is not positive at t = " + fmt(t));
  return j;
}

WarpSample WarpingFunction::eval(double t) const {
  const Dual2 j = jet(t);
  return {j.value, j.grad[0], j.hess[0]};
}

double WarpingFunction::mean_curvature(double t) const {
  const WarpSample s = eval(t);
  return s.df / s.f;
}

double WarpingFunction::mean_curvature_prime(double t) const {
  const WarpSample s = eval(t);
  const double h = s.df / s.f;
  return s.d2f / s.f - h * h;
}

const Domain1D& WarpingFunction::domain() const { return model_->domain; }
const std::string& WarpingFunction::name() const { return model_->name; }
bool WarpingFunction::is_constant() const { return model_->constant(); }
double WarpingFunction::integration_error_estimate() const { return model_->error_estimate(); }

std::vector<double> WarpingFunction::sample_points(std::size_t count) const {
  const Domain1D& d = model_->domain;
  std::vector<double> ts(count);
  if (count == 1) {
    ts[0] = d.lower();
    return ts;
  }
  const double span = d.length();
  const double denom = d.is_circle() ? static_cast<double>(count) : static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) ts[i] = d.lower() + span * static_cast<double>(i) / denom;
  return ts;
}

MeanCurvatureSigns mean_curvature_signs(const WarpingFunction& wf, std::size_t samples) {
  MeanCurvatureSigns s;
  s.min_h = INFINITY;
  s.min_hprime = INFINITY;
  for (double t : wf.sample_points(samples)) {
    s.min_h = std::min(s.min_h, wf.mean_curvature(t));
    s.min_hprime = std::min(s.min_hprime, wf.mean_curvature_prime(t));
  }
  s.positive = s.min_h > 0.0;
  s.nondecreasing = s.min_hprime >= 0.0;
  return s;
}

}  // namespace warplab
