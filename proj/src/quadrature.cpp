// SPDX-License-Identifier: Apache-2.0
#include "quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "error.hpp"

namespace warplab {

double pairwise_sum(std::span<const double> terms) {
  const std::size_t n = terms.size();
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = 0.0;
    for (double v : terms) s += v;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(terms.first(half)) + pairwise_sum(terms.subspan(half));
}

namespace {

void check_nodes(std::size_t nodes) {
  if (nodes < kMinQuadratureNodes)
    fail(ErrorCode::InvalidArgument,
         "quadrature needs at least " + std::to_string(kMinQuadratureNodes) + " nodes");
}

template <class Apply>
QuadratureResult doubling(std::size_t nodes, double tol, Apply&& apply) {
  check_nodes(nodes);
  QuadratureResult r;
  double prev = apply(nodes);
  r.history.push_back({nodes, prev});
  for (int failures = 0; failures < 3; ++failures) {
    nodes *= 2;
    const double cur = apply(nodes);
    r.history.push_back({nodes, cur});
    if (std::abs(cur - prev) <= tol * std::max(1.0, std::abs(cur))) {
      r.value = cur;
      r.nodes = nodes;
      return r;
    }
    prev = cur;
  }
  fail(ErrorCode::NonConvergence, "quadrature did not settle after three node doublings");
}

}  // namespace

double apply_rule(const QuadratureRule& rule, const Integrand1D& g, double a, double b) {
  check_nodes(rule.nodes);
  std::vector<double> terms;
  if (rule.kind == QuadratureKind::TrapezoidPeriodic) {
    const std::size_t n = rule.nodes;
    const double h = (b - a) / static_cast<double>(n);
    terms.resize(n);
    for (std::size_t i = 0; i < n; ++i) terms[i] = g(a + h * static_cast<double>(i));
    return h * pairwise_sum(terms);
  }
  const std::size_t n = rule.nodes + (rule.nodes % 2);
  const double h = (b - a) / static_cast<double>(n);
  terms.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    const double t = i == n ? b : a + h * static_cast<double>(i);
    terms[i] = w * g(t);
  }
  return h / 3.0 * pairwise_sum(terms);
}

double apply_torus_rule(std::size_t nodes, const IntegrandND& g, std::span<const double> lower,
                        std::span<const double> lengths) {
  check_nodes(nodes);
  const std::size_t m = lengths.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < m; ++i) total *= nodes;
  std::vector<double> terms(total);
  std::vector<double> x(m);
  double cell = 1.0;
  for (std::size_t i = 0; i < m; ++i) cell *= lengths[i] / static_cast<double>(nodes);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (std::size_t i = 0; i < m; ++i) {
      x[i] = lower[i] + lengths[i] * static_cast<double>(rest % nodes) / static_cast<double>(nodes);
      rest /= nodes;
    }
    terms[idx] = g(x);
  }
  return cell * pairwise_sum(terms);
}

QuadratureResult integrate(const QuadratureRule& rule, const Integrand1D& g, double a, double b,
                           double tol) {
  return doubling(rule.nodes, tol, [&](std::size_t n) {
    QuadratureRule r = rule;
    r.nodes = n;
    return apply_rule(r, g, a, b);
  });
}

QuadratureResult integrate_torus(std::size_t nodes, const IntegrandND& g,
                                 std::span<const double> lower, std::span<const double> lengths,
                                 double tol) {
  return doubling(nodes, tol, [&](std::size_t n) { return apply_torus_rule(n, g, lower, lengths); });
}

}  // namespace warplab
