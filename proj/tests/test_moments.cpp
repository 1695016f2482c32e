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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "skewlda/error.hpp"
#include "skewlda/model.hpp"
#include "skewlda/moments.hpp"
#include "test_support.hpp"

using namespace skewlda;
using namespace skewlda::moments;

namespace {

Matrix rows(std::initializer_list<std::initializer_list<double>> values) {
  Matrix m(static_cast<Eigen::Index>(values.size()),
           static_cast<Eigen::Index>(values.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : values) {
    Eigen::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

// Slices by the defining triple loop.
TkSet slices_by_hand(const Matrix& z) {
  const Eigen::Index n = z.rows(), p = z.cols();
  TkSet out;
  for (Eigen::Index k = 0; k < p; ++k) {
    Matrix s = Matrix::Zero(p, p);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index a = 0; a < p; ++a)
        for (Eigen::Index b = 0; b < p; ++b) s(a, b) += z(i, a) * z(i, b) * z(i, k);
    out.slices.push_back(s / static_cast<double>(n));
  }
  return out;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

TEST_CASE("sample moments of a symmetric sample") {
  const auto m = sample_moments(rows({{1, 0}, {-1, 0}, {2, 0}, {-2, 0}}));
  CHECK(m.mean.norm() == 0.0);
  CHECK(m.c3_hat.norm() == 0.0);
  CHECK(m.c2_hat(0, 0) == doctest::Approx(2.5));
  CHECK(m.n == 4);
}

TEST_CASE("sample moments of a two-point sample") {
  const auto m = sample_moments(rows({{0}, {3}}));
  CHECK(m.mean(0) == doctest::Approx(1.5));
  CHECK(m.c2_hat(0, 0) == doctest::Approx(2.25));
  CHECK(std::abs(m.c3_hat(0)) < 1e-15);
}

TEST_CASE("sample moments reject fewer than two rows") {
  try {
    sample_moments(rows({{1, 2}}));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kInsufficientData);
  }
}

TEST_CASE("sample moments are translation invariant") {
  RandomStream rng(31);
  for (int rep = 0; rep < 20; ++rep) {
    const Matrix x = testing::random_matrix(rng, 200, 4).array().exp().matrix();
    const Vector b = 10.0 * testing::random_matrix(rng, 4, 1);
    const auto m0 = sample_moments(x);
    const auto m1 = sample_moments(Matrix(x.rowwise() + b.transpose()));
    CHECK((m1.c2_hat - m0.c2_hat).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((m1.c3_hat - m0.c3_hat).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((m1.mean - m0.mean - b).norm() < 1e-10);
  }
}

TEST_CASE("sample moments converge to population moments") {
  RandomStream rng(32);
  const auto params = testing::random_params(rng, 3);
  const Eigen::Index n = 200000;
  const auto data = model::sample(params, n, rng);
  const auto m = sample_moments(data);
  const auto pm = model::population_moments(params);
  // Per-entry standard errors from the population fourth and sixth moments.
  const Matrix se2 = (pm.cov_xkronx.diagonal().array() / n).sqrt().matrix().reshaped(3, 3);
  CHECK(((m.c2_hat - pm.c2).array() / se2.array()).abs().maxCoeff() < 5.0);
  const Vector se3 = (pm.cov_xxtx.diagonal().array() / n).sqrt().matrix();
  CHECK(((m.c3_hat - pm.c3).array() / se3.array()).abs().maxCoeff() < 5.0);
}

TEST_CASE("tk slices match the definition and are symmetric") {
  RandomStream rng(33);
  const Matrix z = testing::random_matrix(rng, 57, 4);
  const auto tk = tk_slices(z);
  const auto ref = slices_by_hand(z);
  REQUIRE(tk.dim() == 4);
  for (Eigen::Index k = 0; k < 4; ++k) {
    CHECK((tk.slices[k] - ref.slices[k]).norm() < 1e-12);
    CHECK(linalg::asymmetry(tk.slices[k]) < 1e-10);
  }
  // Contracting the slices on the diagonal gives the third-moment vector.
  const Vector c3 = z.transpose() * z.rowwise().squaredNorm() / 57.0;
  CHECK((c3_from_slices(tk) - c3).norm() < 1e-12);
}

TEST_CASE("tk slices of a single observation") {
  Matrix z(1, 3);
  z << 0.5, -1.0, 2.0;
  const auto tk = tk_slices(z);
  const Vector v = z.row(0).transpose();
  for (Eigen::Index k = 0; k < 3; ++k) {
    CHECK((tk.slices[k] - v * v.transpose() * v(k)).norm() == 0.0);
  }
}

TEST_CASE("tk slices of standard normal data are near zero") {
  RandomStream rng(34);
  const Eigen::Index n = 100000;
  const auto tk = tk_slices(testing::random_matrix(rng, n, 3));
  const double bound = 5.0 * std::sqrt(15.0 / n);
  for (const auto& s : tk.slices) CHECK(s.cwiseAbs().maxCoeff() < bound);
}

TEST_CASE("population slices on the reference parameters") {
  const auto params = testing::reference_params();
  const auto pm = model::population_moments(params);
  const auto d = model::derive(params);
  const Matrix w = linalg::inv_sqrt(linalg::SpdMatrix(pm.c2)).matrix();
  const auto tk = transformed_slices(pm.cov_x_xkronx, w);
  const double scale = d.beta * d.gamma * std::pow(d.delta, 3);
  for (Eigen::Index k = 0; k < 3; ++k) {
    const Matrix want = scale * d.m(k) * d.m * d.m.transpose();
    CHECK((tk.slices[k] - want).norm() < 1e-12);
  }
  CHECK(tk.slices[0](0, 0) == doctest::Approx(0.4 * 0.21 * std::pow(0.737210, 3) * 8.0)
                                  .epsilon(1e-5));

  const Matrix t = tobi_matrix(tk);
  const auto pairs = linalg::sym_eigen(t);
  CHECK(pairs[1].value < 1e-12 * pairs[0].value);
  CHECK(testing::sign_free_distance(pairs[0].vector, d.w) < 1e-12);
}

TEST_CASE("population slices for random parameters are rank one") {
  RandomStream rng(35);
  for (int rep = 0; rep < 20; ++rep) {
    const auto params = testing::random_params(rng, 2 + rep % 4);
    const auto pm = model::population_moments(params);
    const auto d = model::derive(params);
    const Matrix w = linalg::inv_sqrt(linalg::SpdMatrix(pm.c2)).matrix();
    const auto tk = transformed_slices(pm.cov_x_xkronx, w);
    // The whitened separation is a rotation of delta * m; use it directly.
    const Vector s = w * d.h;
    for (Eigen::Index k = 0; k < tk.dim(); ++k) {
      const Matrix want = d.beta * d.gamma * s(k) * s * s.transpose();
      CHECK((tk.slices[k] - want).norm() < 1e-10);
    }
    CHECK(s.norm() == doctest::Approx(d.delta * d.m.norm()).epsilon(1e-10));
  }
}

TEST_CASE("tobi matrix is PSD and zero for zero slices") {
  TkSet zero;
  for (int k = 0; k < 3; ++k) zero.slices.push_back(Matrix::Zero(3, 3));
  CHECK(tobi_matrix(zero).norm() == 0.0);
  CHECK(tensor_norm(zero) == 0.0);

  RandomStream rng(36);
  for (int rep = 0; rep < 30; ++rep) {
    const Matrix z = testing::random_matrix(rng, 40, 5).array().cube().matrix();
    const Matrix t = tobi_matrix(tk_slices(z));
    CHECK(linalg::asymmetry(t) < 1e-12);
    const auto pairs = linalg::sym_eigen(t);
    CHECK(pairs.back().value >= -1e-10 * std::max(1.0, pairs.front().value));
  }
}

TEST_CASE("sample third moment converges at the root-n rate") {
  RandomStream rng(37);
  const auto params = model::MixtureParams::centered(
      0.7, 2.0 * Vector::Unit(3, 0), linalg::SpdMatrix(Matrix::Identity(3, 3)));
  const auto d = model::derive(params);
  const Vector truth = d.beta * d.gamma * d.h.squaredNorm() * d.h;
  auto errors = [&](Eigen::Index n) {
    std::vector<double> e;
    for (int rep = 0; rep < 20; ++rep) {
      const auto data = model::sample(params, n, rng);
      e.push_back((sample_moments(data).c3_hat - truth).norm());
    }
    return median(e);
  };
  const double small = errors(5000);
  const double large = errors(40000);
  CHECK(large < small);
  CHECK(large < 3.0 * small);
  CHECK(large * std::sqrt(40000.0) < 10.0 * small * std::sqrt(5000.0));
}

TEST_CASE("transformed slices reject mismatched shapes") {
  try {
    transformed_slices(Matrix::Zero(3, 4), Matrix::Identity(3, 3));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kDimension);
  }
}
