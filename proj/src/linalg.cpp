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

#include "skewlda/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

#include "skewlda/error.hpp"

namespace skewlda::linalg {

namespace {

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    std::ostringstream os;
    os << what << ": expected a non-empty square matrix, got " << m.rows()
       << "x" << m.cols();
    throw Error(ErrorKind::kDimension, os.str());
  }
}

void require_symmetric(const Matrix& m, double tol, const char* what) {
  require_square(m, what);
  const double a = asymmetry(m);
  if (!(a <= tol)) {
    std::ostringstream os;
    os << what << ": matrix is not symmetric (relative asymmetry " << a << ")";
    throw Error(ErrorKind::kSymmetryViolation, os.str());
  }
}

}  // namespace

double asymmetry(const Matrix& m) {
  const double norm = m.norm();
  if (norm == 0.0) return 0.0;
  return (m - m.transpose()).norm() / norm;
}

SpdMatrix::SpdMatrix(Matrix m) : m_(std::move(m)) {
  require_symmetric(m_, kSymmetryTolerance, "SpdMatrix");
  Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success || !(es.eigenvalues().minCoeff() > 0.0)) {
    throw Error(ErrorKind::kNearSingularCovariance,
                "SpdMatrix: matrix is not positive definite");
  }
}

SpdMatrix SpdMatrix::unchecked(Matrix m) {
  return SpdMatrix(std::move(m), Unchecked{});
}

std::vector<EigenPair> sym_eigen(const Matrix& m, double symmetry_tol) {
  require_symmetric(m, symmetry_tol, "sym_eigen");
  // Only the lower triangle is read by the solver; feed it the symmetric part.
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::kDomain, "sym_eigen: eigensolver did not converge");
  }
  const Eigen::Index p = m.rows();
  std::vector<EigenPair> pairs;
  pairs.reserve(static_cast<std::size_t>(p));
  // Eigen sorts ascending.
  for (Eigen::Index j = p - 1; j >= 0; --j) {
    Vector v = es.eigenvectors().col(j);
    v.normalize();
    Eigen::Index lead = 0;
    for (Eigen::Index i = 1; i < p; ++i) {
      if (std::abs(v(i)) > std::abs(v(lead))) lead = i;
    }
    if (v(lead) < 0.0) v = -v;
    pairs.push_back({es.eigenvalues()(j), std::move(v)});
  }
  return pairs;
}

SpdMatrix inv_sqrt(const SpdMatrix& m, double floor_rel) {
  const auto pairs = sym_eigen(m.matrix());
  const double largest = pairs.front().value;
  const double smallest = pairs.back().value;
  if (!(smallest > floor_rel * largest)) {
    std::ostringstream os;
    os << "inv_sqrt: smallest eigenvalue " << smallest
       << " is below the singularity floor relative to " << largest;
    throw Error(ErrorKind::kNearSingularCovariance, os.str());
  }
  const Eigen::Index p = m.dim();
  Matrix r = Matrix::Zero(p, p);
  for (const auto& pair : pairs) {
    r.noalias() += (1.0 / std::sqrt(pair.value)) * pair.vector *
                   pair.vector.transpose();
  }
  r = 0.5 * (r + r.transpose()).eval();
  return SpdMatrix::unchecked(std::move(r));
}

ProjectorPair projector_pair(const Vector& v) {
  const double sq = v.squaredNorm();
  if (!(sq > 0.0)) {
    throw Error(ErrorKind::kDomain, "projector_pair: zero vector");
  }
  ProjectorPair out;
  out.p = v * v.transpose() / sq;
  out.q = Matrix::Identity(v.size(), v.size()) - out.p;
  return out;
}

Matrix commutation_matrix(Eigen::Index p) {
  if (p < 1) {
    throw Error(ErrorKind::kDimension, "commutation_matrix: p must be >= 1");
  }
  Matrix k = Matrix::Zero(p * p, p * p);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      k(i + j * p, j + i * p) = 1.0;
    }
  }
  return k;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

namespace {

void require_unit(const Vector& u, const char* what) {
  if (u.size() == 0 || std::abs(u.norm() - 1.0) > 1e-10) {
    throw Error(ErrorKind::kDomain, std::string(what) + ": u must be unit length");
  }
}

void require_alpha(double alpha, const char* what) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorKind::kDomain, std::string(what) + ": alpha must be >= 0");
  }
}

}  // namespace

Matrix kron_sum_inverse(double alpha, const Vector& u) {
  require_unit(u, "kron_sum_inverse");
  require_alpha(alpha, "kron_sum_inverse");
  const Eigen::Index p = u.size();
  const Matrix eye = Matrix::Identity(p, p);
  const Matrix shrink = eye - (alpha / (alpha + 1.0)) * u * u.transpose();
  return (kron(eye, eye) + (alpha + 1.0) * kron(shrink, shrink)) /
         (2.0 * (alpha + 2.0));
}

Matrix kron_sum(double alpha, const Vector& u) {
  require_unit(u, "kron_sum");
  require_alpha(alpha, "kron_sum");
  const Eigen::Index p = u.size();
  const Matrix eye = Matrix::Identity(p, p);
  const Matrix stretch = eye + alpha * u * u.transpose();
  return kron(eye, stretch) + kron(stretch, eye);
}

}  // namespace skewlda::linalg
