// SPDX-License-Identifier: Apache-2.0
//
// Second-order forward-mode automatic differentiation.
//
// A Jet<N> carries a value together with its gradient and Hessian with respect
// to N independent variables. Every elementary function is lifted through the
// second-order chain rule
//
//   g(a).grad = g'(a) a.grad
//   g(a).hess = g''(a) a.grad a.grad^T + g'(a) a.hess
//
// so derivatives are exact up to rounding. Jet<1> is the univariate
// (f, f', f'') triple used for warping functions.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace warplab {

template <std::size_t N>
struct Jet {
  double value = 0.0;
  std::array<double, N> grad{};
  std::array<double, N * N> hess{};

  static Jet constant(double c) {
    Jet j;
    j.value = c;
    return j;
  }

  static Jet variable(double x, std::size_t index) {
    Jet j;
    j.value = x;
    j.grad[index] = 1.0;
    return j;
  }

  double d(std::size_t i) const { return grad[i]; }
  double dd(std::size_t i, std::size_t k) const { return hess[i * N + k]; }
};

using Dual2 = Jet<1>;

// Lifts a scalar function with known first and second derivatives at a.value.
template <std::size_t N>
Jet<N> chain(const Jet<N>& a, double g0, double g1, double g2) {
  Jet<N> r;
  r.value = g0;
  for (std::size_t i = 0; i < N; ++i) r.grad[i] = g1 * a.grad[i];
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t k = 0; k < N; ++k)
      r.hess[i * N + k] = g2 * a.grad[i] * a.grad[k] + g1 * a.hess[i * N + k];
  return r;
}

template <std::size_t N>
Jet<N> operator+(const Jet<N>& a, const Jet<N>& b) {
  Jet<N> r;
  r.value = a.value + b.value;
  for (std::size_t i = 0; i < N; ++i) r.grad[i] = a.grad[i] + b.grad[i];
  for (std::size_t i = 0; i < N * N; ++i) r.hess[i] = a.hess[i] + b.hess[i];
  return r;
}

template <std::size_t N>
Jet<N> operator-(const Jet<N>& a, const Jet<N>& b) {
  Jet<N> r;
  r.value = a.value - b.value;
  for (std::size_t i = 0; i < N; ++i) r.grad[i] = a.grad[i] - b.grad[i];
  for (std::size_t i = 0; i < N * N; ++i) r.hess[i] = a.hess[i] - b.hess[i];
  return r;
}

template <std::size_t N>
Jet<N> operator-(const Jet<N>& a) {
  return chain(a, -a.value, -1.0, 0.0);
}

template <std::size_t N>
Jet<N> operator*(const Jet<N>& a, const Jet<N>& b) {
  Jet<N> r;
  r.value = a.value * b.value;
  for (std::size_t i = 0; i < N; ++i) r.grad[i] = a.grad[i] * b.value + a.value * b.grad[i];
  // The cross term is written so that (i,k) and (k,i) add the same two
  // products, which keeps the Hessian exactly symmetric.
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t k = 0; k < N; ++k)
      r.hess[i * N + k] = a.hess[i * N + k] * b.value + a.value * b.hess[i * N + k] +
                          (a.grad[i] * b.grad[k] + a.grad[k] * b.grad[i]);
  return r;
}

template <std::size_t N>
Jet<N> reciprocal(const Jet<N>& a) {
  const double inv = 1.0 / a.value;
  return chain(a, inv, -inv * inv, 2.0 * inv * inv * inv);
}

template <std::size_t N>
Jet<N> operator/(const Jet<N>& a, const Jet<N>& b) {
  return a * reciprocal(b);
}

template <std::size_t N>
Jet<N> sin(const Jet<N>& a) {
  const double s = std::sin(a.value), c = std::cos(a.value);
  return chain(a, s, c, -s);
}

template <std::size_t N>
Jet<N> cos(const Jet<N>& a) {
  const double s = std::sin(a.value), c = std::cos(a.value);
  return chain(a, c, -s, -c);
}

template <std::size_t N>
Jet<N> sinh(const Jet<N>& a) {
  const double s = std::sinh(a.value), c = std::cosh(a.value);
  return chain(a, s, c, s);
}

template <std::size_t N>
Jet<N> cosh(const Jet<N>& a) {
  const double s = std::sinh(a.value), c = std::cosh(a.value);
  return chain(a, c, s, c);
}

template <std::size_t N>
Jet<N> tanh(const Jet<N>& a) {
  const double th = std::tanh(a.value);
  const double sech2 = 1.0 - th * th;
  return chain(a, th, sech2, -2.0 * th * sech2);
}

template <std::size_t N>
Jet<N> exp(const Jet<N>& a) {
  const double e = std::exp(a.value);
  return chain(a, e, e, e);
}

template <std::size_t N>
Jet<N> log(const Jet<N>& a) {
  const double inv = 1.0 / a.value;
  return chain(a, std::log(a.value), inv, -inv * inv);
}

template <std::size_t N>
Jet<N> sqrt(const Jet<N>& a) {
  const double s = std::sqrt(a.value);
  return chain(a, s, 0.5 / s, -0.25 / (s * a.value));
}

// a^p for a constant exponent p.
template <std::size_t N>
Jet<N> pow(const Jet<N>& a, double p) {
  if (p == 0.0) return Jet<N>::constant(1.0);
  if (p == 1.0) return a;
  const double x = a.value;
  const double g0 = std::pow(x, p);
  const double g1 = p * std::pow(x, p - 1.0);
  const double g2 = p * (p - 1.0) * std::pow(x, p - 2.0);
  return chain(a, g0, g1, g2);
}

}  // namespace warplab
