// SPDX-License-Identifier: Apache-2.0
#include "fd_embedding.hpp"

#include <cmath>

namespace warplab::fd {

namespace {

Jet2 plain(const Chart& chart, const Vec& u, double h) {
  const int k = static_cast<int>(u.size());
  Jet2 j;
  j.point = chart(u);
  const int n = static_cast<int>(j.point.size());
  j.tangents.resize(n, k);
  j.second.assign(static_cast<std::size_t>(k), Mat(n, k));
  auto at = [&](int a, double sa, int b, double sb) {
    Vec v = u;
    v[a] += sa;
    if (b >= 0) v[b] += sb;
    return chart(v);
  };
  for (int a = 0; a < k; ++a) {
    const Vec p = at(a, h, -1, 0), m = at(a, -h, -1, 0);
    j.tangents.col(a) = (p - m) / (2 * h);
    j.second[static_cast<std::size_t>(a)].col(a) = (p - 2 * j.point + m) / (h * h);
  }
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) {
      const Vec v = (at(a, h, b, h) - at(a, h, b, -h) - at(a, -h, b, h) + at(a, -h, b, -h)) /
                    (4 * h * h);
      j.second[static_cast<std::size_t>(a)].col(b) = v;
      j.second[static_cast<std::size_t>(b)].col(a) = v;
    }
  return j;
}

}  // namespace

Jet2 derivatives(const Chart& chart, const Vec& u, const Stencil& st) {
  Jet2 coarse = plain(chart, u, st.h);
  if (st.richardson) {
    const Jet2 fine = plain(chart, u, 0.5 * st.h);
    coarse.tangents = (4 * fine.tangents - coarse.tangents) / 3;
    for (std::size_t a = 0; a < coarse.second.size(); ++a)
      coarse.second[a] = (4 * fine.second[a] - coarse.second[a]) / 3;
  }
  coarse.metric = coarse.tangents.transpose() * coarse.tangents;
  return coarse;
}

Mat projector(const Mat& basis) {
  const Eigen::HouseholderQR<Mat> qr(basis);
  const Mat q = qr.householderQ() * Mat::Identity(basis.rows(), basis.cols());
  return q * q.transpose();
}

Mat complement(const Mat& basis) {
  const Eigen::HouseholderQR<Mat> qr(basis);
  const Mat q = qr.householderQ();
  return q.rightCols(basis.rows() - basis.cols());
}

Vec mean_curvature(const Jet2& j, const Mat& normal_projector) {
  const int k = static_cast<int>(j.tangents.cols());
  const Mat ginv = j.metric.inverse();
  Vec h = Vec::Zero(j.point.size());
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) h += ginv(a, b) * j.dd(a, b);
  return normal_projector * h / k;
}

Mat second_form(const Jet2& j, const Vec& nu) {
  const int k = static_cast<int>(j.tangents.cols());
  Mat b(k, k);
  for (int a = 0; a < k; ++a)
    for (int c = 0; c < k; ++c) b(a, c) = j.dd(a, c).dot(nu);
  return 0.5 * (b + b.transpose());
}

Vec shape_eigenvalues(const Mat& metric, const Mat& b) {
  const Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(b, metric);
  return es.eigenvalues();
}

double form_norm(const Mat& metric, const Mat& b) {
  const Mat ginv = metric.inverse();
  const Mat s = ginv * b;
  return std::sqrt(std::abs((s * s).trace()));
}

Chart sphere_chart(const Vec& center, double radius, const Vec& point) {
  const Vec dir = (point - center).normalized();
  const Mat e = complement(dir);
  return [center, radius, dir, e](const Vec& u) -> Vec {
    return center + radius * (dir + e * u).normalized();
  };
}

}  // namespace warplab::fd
