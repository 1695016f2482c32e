// Copyright 2026 The skewlda Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "skewlda/moments.hpp"

#include <cmath>
#include <sstream>

#include "skewlda/error.hpp"

namespace skewlda::moments {

MomentSet sample_moments(const Matrix& x) {
  const Eigen::Index n = x.rows();
  if (n < 2) {
    std::ostringstream os;
    os << "sample_moments: need at least 2 observations, got " << n;
    throw Error(ErrorKind::kInsufficientData, os.str());
  }
  MomentSet out;
  out.n = n;
  out.mean = x.colwise().mean().transpose();
  const Matrix centered = x.rowwise() - out.mean.transpose();
  const double inv_n = 1.0 / static_cast<double>(n);
  Matrix c2 = centered.transpose() * centered * inv_n;
  out.c2_hat = 0.5 * (c2 + c2.transpose());
  out.c3_hat = centered.transpose() * centered.rowwise().squaredNorm() * inv_n;
  return out;
}

MomentSet sample_moments(const model::DataSet& data) {
  return sample_moments(data.observations);
}

TkSet tk_slices(const Matrix& z) {
  const Eigen::Index n = z.rows();
  const Eigen::Index p = z.cols();
  TkSet out;
  out.slices.reserve(static_cast<std::size_t>(p));
  const double inv_n = n > 0 ? 1.0 / static_cast<double>(n) : 0.0;
  for (Eigen::Index k = 0; k < p; ++k) {
    const Matrix weighted = z.array().colwise() * z.col(k).array();
    Matrix t = z.transpose() * weighted * inv_n;
    out.slices.push_back(0.5 * (t + t.transpose()));
  }
  return out;
}

Matrix tobi_matrix(const TkSet& tk) {
  const Eigen::Index p = tk.dim();
  Matrix t = Matrix::Zero(p, p);
  for (const auto& s : tk.slices) t.noalias() += s * s;
  return 0.5 * (t + t.transpose());
}

Vector c3_from_slices(const TkSet& tk) {
  const Eigen::Index p = tk.dim();
  Vector c3 = Vector::Zero(p);
  for (Eigen::Index k = 0; k < p; ++k) c3 += tk.slices[k].col(k);
  return c3;
}

double tensor_norm(const TkSet& tk) {
  double sq = 0.0;
  for (const auto& s : tk.slices) sq += s.squaredNorm();
  return std::sqrt(sq);
}

TkSet transformed_slices(const Matrix& m3, const Matrix& a) {
  const Eigen::Index p = a.rows();
  if (a.cols() != p || m3.rows() != p || m3.cols() != p * p) {
    throw Error(ErrorKind::kDimension, "transformed_slices: shape mismatch");
  }
  // Contract one tensor index at a time: W(i,j,k) = A_ia A_jb A_kc M(a,b,c).
  auto at = [p](const std::vector<double>& t, Eigen::Index i, Eigen::Index j,
                Eigen::Index k) { return t[(i * p + j) * p + k]; };
  std::vector<double> t0(p * p * p), t1(p * p * p, 0.0), t2(p * p * p, 0.0),
      t3(p * p * p, 0.0);
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < p; ++j)
      for (Eigen::Index k = 0; k < p; ++k) t0[(i * p + j) * p + k] = m3(i, j * p + k);
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < p; ++j)
      for (Eigen::Index k = 0; k < p; ++k)
        for (Eigen::Index c = 0; c < p; ++c)
          t1[(i * p + j) * p + k] += a(k, c) * at(t0, i, j, c);
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < p; ++j)
      for (Eigen::Index k = 0; k < p; ++k)
        for (Eigen::Index b = 0; b < p; ++b)
          t2[(i * p + j) * p + k] += a(j, b) * at(t1, i, b, k);
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < p; ++j)
      for (Eigen::Index k = 0; k < p; ++k)
        for (Eigen::Index c = 0; c < p; ++c)
          t3[(i * p + j) * p + k] += a(i, c) * at(t2, c, j, k);
  TkSet out;
  for (Eigen::Index k = 0; k < p; ++k) {
    Matrix s(p, p);
    for (Eigen::Index i = 0; i < p; ++i)
      for (Eigen::Index j = 0; j < p; ++j) s(i, j) = at(t3, i, j, k);
    out.slices.push_back(0.5 * (s + s.transpose()));
  }
  return out;
}

}  // namespace skewlda::moments
