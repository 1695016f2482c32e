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

#pragma once

#include <vector>

#include "skewlda/linalg.hpp"
#include "skewlda/model.hpp"

namespace skewlda::moments {

/// Sample mean, covariance and third-moment vector (all with divisor n).
struct MomentSet {
  Vector mean;
  Matrix c2_hat;  // (1/n) sum (x_i - xbar)(x_i - xbar)'
  Vector c3_hat;  // (1/n) sum (x_i - xbar)(x_i - xbar)'(x_i - xbar)
  Eigen::Index n = 0;
};

/// Frontal slices T_k = (1/n) sum z_i z_i' z_ik of the third-moment tensor of
/// whitened data.
struct TkSet {
  std::vector<Matrix> slices;

  Eigen::Index dim() const noexcept {
    return static_cast<Eigen::Index>(slices.size());
  }
};

MomentSet sample_moments(const Matrix& observations);
MomentSet sample_moments(const model::DataSet& data);

/// `whitened` must already be centred and whitened; not checked.
TkSet tk_slices(const Matrix& whitened);

/// T = sum_k T_k^2.
Matrix tobi_matrix(const TkSet& tk);

/// The third-moment vector E(z z' z) recovered from the slices:
/// component i is sum_k T_k(i, k).
Vector c3_from_slices(const TkSet& tk);

/// sqrt(sum_k |T_k|_F^2), the Frobenius norm of the whole tensor.
double tensor_norm(const TkSet& tk);

/// Slices of A x for a zero-mean x whose third moments are given as the
/// p x p^2 matrix E{x (x (x) x)'}.
TkSet transformed_slices(const Matrix& third_moment, const Matrix& a);

}  // namespace skewlda::moments
