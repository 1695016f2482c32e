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

#include <Eigen/Dense>

namespace skewlda {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

namespace linalg {

inline constexpr double kSymmetryTolerance = 1e-12;
inline constexpr double kSingularityFloor = 1e-12;

/// Relative Frobenius asymmetry ||M - M^T|| / ||M|| (0 for the zero matrix).
double asymmetry(const Matrix& m);

/// A symmetric positive definite matrix. Construction checks both properties
/// and throws kSymmetryViolation / kNearSingularCovariance on failure.
class SpdMatrix {
 public:
  explicit SpdMatrix(Matrix m);

  /// Skips validation; for results that are SPD by construction.
  static SpdMatrix unchecked(Matrix m);

  const Matrix& matrix() const noexcept { return m_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }

 private:
  struct Unchecked {};
  SpdMatrix(Matrix m, Unchecked) : m_(std::move(m)) {}

  Matrix m_;
};

struct EigenPair {
  double value;
  Vector vector;
};

/// Eigenpairs of a symmetric matrix in descending order of eigenvalue. Each
/// eigenvector has unit norm and its first largest-magnitude coordinate is
/// nonnegative, so repeated calls give identical output.
std::vector<EigenPair> sym_eigen(const Matrix& m,
                                 double symmetry_tol = kSymmetryTolerance);

/// Unique symmetric positive definite inverse square root. Throws
/// kNearSingularCovariance when the smallest eigenvalue is not above
/// `floor_rel` times the largest.
SpdMatrix inv_sqrt(const SpdMatrix& m, double floor_rel = kSingularityFloor);

struct ProjectorPair {
  Matrix p;  // v v^T / |v|^2
  Matrix q;  // I - p
};

ProjectorPair projector_pair(const Vector& v);

/// The (p, p) commutation matrix K with K vec(A) = vec(A^T), vec stacking
/// columns.
Matrix commutation_matrix(Eigen::Index p);

Matrix kron(const Matrix& a, const Matrix& b);

/// Closed-form inverse of [I (x) (I + a uu^T)] + [(I + a uu^T) (x) I] for unit u.
Matrix kron_sum_inverse(double alpha, const Vector& u);

/// The Kronecker sum that kron_sum_inverse inverts, formed explicitly.
Matrix kron_sum(double alpha, const Vector& u);

}  // namespace linalg
}  // namespace skewlda
