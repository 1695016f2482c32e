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
#include <map>
#include <vector>

#include "skewlda/error.hpp"
#include "skewlda/estimators.hpp"
#include "skewlda/model.hpp"
#include "skewlda/moments.hpp"
#include "test_support.hpp"

using namespace skewlda;
using namespace skewlda::estimators;

namespace {

struct Population {
  SpdMatrix whitener;
  moments::TkSet tk;
  Vector c3w;
  Matrix c2;
  Vector c3;
};

// Exact population moments in place of the sample ones.
Population population_inputs(const model::MixtureParams& params) {
  const auto pm = model::population_moments(params);
  const SpdMatrix w = linalg::inv_sqrt(SpdMatrix(pm.c2));
  auto tk = moments::transformed_slices(pm.cov_x_xkronx, w.matrix());
  const Vector c3w = moments::c3_from_slices(tk);
  return {w, std::move(tk), c3w, pm.c2, pm.c3};
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::kUsage;
}

model::MixtureParams simulation_params(double tau) {
  return model::MixtureParams::centered(0.7, std::sqrt(tau) * Vector::Unit(3, 0),
                                        SpdMatrix(Matrix::Identity(3, 3)));
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double msi_of(const Vector& a, const Vector& b) {
  const double c = a.normalized().dot(b.normalized());
  return c * c;
}

}  // namespace

TEST_CASE("method names round trip") {
  for (Method m : {Method::kMom, Method::kSkewvec, Method::kTobi, Method::kJade3,
                   Method::kLda, Method::kPp}) {
    CHECK(parse_method(method_name(m)) == m);
  }
  CHECK(parse_method("JADE3") == Method::kJade3);
  CHECK(kind_of([] { parse_method("fobi"); }) == ErrorKind::kUsage);
  CHECK_FALSE(is_affine_equivariant(Method::kMom));
  CHECK(is_affine_equivariant(Method::kTobi));
}

TEST_CASE("whiten: white output and constructed covariance") {
  RandomStream rng(41);
  const auto params = testing::random_params(rng, 4);
  const auto data = model::sample(params, 3000, rng);
  const auto w = whiten(data);
  const Matrix cov = w.whitened.transpose() * w.whitened / 3000.0;
  CHECK((cov - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(w.whitened.colwise().mean().norm() < 1e-10);

  const auto again = whiten(w.whitened);
  CHECK((again.whitener.matrix() - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-8);

  // Covariance diag(4, 1) exactly: the four points (+-2, +-1) with mean zero.
  Matrix x(4, 2);
  x << 2, 1, -2, -1, 2, -1, -2, 1;
  const auto d = whiten(x);
  Matrix want = Matrix::Zero(2, 2);
  want(0, 0) = 0.5;
  want(1, 1) = 1.0;
  CHECK((d.whitener.matrix() - want).norm() < 1e-12);
}

TEST_CASE("whiten: white noise gives a whitener near the identity") {
  RandomStream rng(42);
  const Eigen::Index n = 20000;
  const auto w = whiten(testing::random_matrix(rng, n, 3));
  CHECK((w.whitener.matrix() - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <
        5.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("whiten: singular covariance") {
  Matrix x(5, 2);
  x << 1, 2, 2, 4, 3, 6, 4, 8, 5, 10;
  CHECK(kind_of([&] { whiten(x); }) == ErrorKind::kNearSingularCovariance);
}

TEST_CASE("Fisher consistency on the reference parameters") {
  const auto params = testing::reference_params();
  const auto pop = population_inputs(params);
  const Vector theta = model::derive(params).theta;
  RandomStream rng(43);

  const auto mom = mom_direction(pop.c2, pop.c3, 0.7);
  CHECK((mom.raw - theta).norm() < 1e-10);

  const auto sv = skewvec_direction(pop.whitener, pop.c3w);
  CHECK(sv.raw(0) == doctest::Approx(0.198488).epsilon(1e-6));
  CHECK(sv.raw.tail(2).norm() < 1e-12);

  const auto tobi = align_sign(tobi_direction(pop.whitener, pop.tk), theta);
  CHECK(tobi.raw(0) == doctest::Approx(0.737210).epsilon(1e-6));
  CHECK(tobi.raw.tail(2).norm() < 1e-12);

  IterationOptions opts;
  opts.init = Vector::Ones(3);
  const auto jade = align_sign(jade3_direction(pop.whitener, pop.tk, opts, rng), theta);
  CHECK(jade.converged);
  CHECK(jade.iterations <= 2);
  CHECK((jade.raw - tobi.raw).norm() < 1e-12);

  const auto pp = align_sign(pp_direction(pop.whitener, pop.tk, opts, rng), theta);
  CHECK(pp.converged);
  CHECK((pp.unit - Vector::Unit(3, 0)).norm() < 1e-10);
}

TEST_CASE("Fisher consistency on random parameters") {
  RandomStream rng(44);
  for (int rep = 0; rep < 50; ++rep) {
    const auto params = testing::random_params(rng, 2 + rep % 5);
    const auto d = model::derive(params);
    const auto pop = population_inputs(params);
    const double scale = 1.0 / std::sqrt(d.tau * (1.0 + d.beta * d.tau));
    const double tol = 1e-10 * std::max(1.0, d.theta.norm());

    CHECK((mom_direction(pop.c2, pop.c3, params.alpha1()).raw - d.theta).norm() < tol);

    const double sv_factor =
        d.beta * d.gamma * d.tau / ((1.0 + d.beta * d.tau) * (1.0 + d.beta * d.tau));
    CHECK((skewvec_direction(pop.whitener, pop.c3w).raw - sv_factor * d.theta).norm() <
          tol);

    const auto tobi = align_sign(tobi_direction(pop.whitener, pop.tk), d.theta);
    CHECK((tobi.raw - scale * d.theta).norm() < tol);

    const auto jade = align_sign(jade3_direction(pop.whitener, pop.tk, {}, rng), d.theta);
    CHECK(jade.converged);
    CHECK((jade.raw - scale * d.theta).norm() < tol);

    // Labels known exactly: pooled within-class covariance is sigma.
    const auto lda = lda_direction(params.sigma().matrix(), params.mu1(), params.mu2());
    CHECK((lda.unit - d.theta.normalized()).norm() < 1e-10);
  }
}

TEST_CASE("jade3 restarts when the start is orthogonal to the signal") {
  const auto params = testing::reference_params();
  const auto pop = population_inputs(params);
  IterationOptions opts;
  opts.init = Vector::Unit(3, 1);
  RandomStream rng(45);
  const auto est = align_sign(jade3_direction(pop.whitener, pop.tk, opts, rng),
                              Vector::Unit(3, 0));
  CHECK(est.restarts >= 1);
  CHECK(est.converged);
  CHECK((est.unit - Vector::Unit(3, 0)).norm() < 1e-10);

  // No restart budget: the stall is reported, not hidden.
  opts.max_restarts = 0;
  const auto stalled = jade3_direction(pop.whitener, pop.tk, opts, rng);
  CHECK_FALSE(stalled.converged);
  CHECK(stalled.restarts == 0);
}

TEST_CASE("jade3 converges on model data with a monotone objective") {
  const auto params = simulation_params(8.0);
  int converged = 0, monotone = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RandomStream rng(seed);
    const auto data = model::sample(params, 2000, rng);
    const auto est = est_jade3(data, {}, rng);
    converged += est.converged;
    monotone += est.objective_monotone;
    CHECK(est.iterations <= 200);
    CHECK(std::abs(est.unit.norm() - 1.0) < 1e-12);
    CHECK(est.objective_trace.back() >= est.objective_trace.front() - 1e-12);
  }
  CHECK(converged == 20);
  CHECK(monotone == 20);
}

TEST_CASE("affine equivariance up to sign") {
  RandomStream rng(46);
  const auto data = model::sample(testing::random_params(rng, 3), 1500, rng);
  const auto base_sv = est_skewvec(data);
  const auto base_tobi = est_tobi(data);
  // 1 - |cos| < tol fixes the angle only to sqrt(2 tol); tighten both sides.
  IterationOptions tight;
  tight.tol = 1e-15;
  tight.max_iter = 2000;
  const auto base_jade = est_jade3(data, tight, rng);
  const auto base_pp = est_pp(data, tight, rng);
  CHECK(base_jade.converged);
  CHECK(base_pp.converged);
  for (int rep = 0; rep < 20; ++rep) {
    const Matrix a = testing::random_well_conditioned(rng, 3);
    const Vector b = 5.0 * rng.normal_vector(3);
    const model::DataSet moved{(data.observations * a).rowwise() + b.transpose(),
                               std::nullopt};
    const Matrix a_inv = a.inverse();
    CHECK(testing::sign_free_distance(est_skewvec(moved).unit, a_inv * base_sv.unit) <
          1e-7);
    CHECK(testing::sign_free_distance(est_tobi(moved).unit, a_inv * base_tobi.unit) <
          1e-7);
    CHECK(testing::sign_free_distance(est_jade3(moved, tight, rng).unit,
                                      a_inv * base_jade.unit) < 1e-7);
    CHECK(testing::sign_free_distance(est_pp(moved, tight, rng).unit,
                                      a_inv * base_pp.unit) < 1e-7);
  }
}

TEST_CASE("method of moments is not affine equivariant") {
  RandomStream rng(47);
  const auto data = model::sample(testing::random_params(rng, 3), 4000, rng);
  const auto base = est_mom(data, 0.7);
  Matrix a = Matrix::Identity(3, 3);
  a(0, 0) = 3.0;
  a(1, 0) = 1.5;
  const model::DataSet moved{data.observations * a, std::nullopt};
  CHECK(testing::sign_free_distance(est_mom(moved, 0.7).unit, a.inverse() * base.unit) >
        1e-6);
}

TEST_CASE("method of moments errors") {
  Matrix x(4, 2);
  x << 1, 0, -1, 0, 0, 1, 0, -1;
  const model::DataSet sym{x, std::nullopt};
  CHECK(kind_of([&] { est_mom(sym, 0.7); }) == ErrorKind::kDegenerateSkewness);
  CHECK(kind_of([&] { est_mom(sym, 0.5); }) == ErrorKind::kInvalidWeight);
  CHECK(kind_of([&] { est_skewvec(sym); }) == ErrorKind::kDegenerateSkewness);
  CHECK(kind_of([&] { est_tobi(sym); }) == ErrorKind::kDegenerateSkewness);
  CHECK(kind_of([&] { est_pp(sym); }) == ErrorKind::kDegenerateSkewness);

  // c3 chosen so the subtracted rank-one term cancels C2 along c3.
  const double beta = 0.21, gamma = 0.4;
  Vector c3 = Vector::Unit(2, 0);
  Matrix c2 = Matrix::Identity(2, 2);
  c2(0, 0) = std::cbrt(beta) * std::pow(gamma, -2.0 / 3.0);
  CHECK(kind_of([&] { mom_direction(c2, c3, 0.7); }) == ErrorKind::kSingularMatrix);

  RandomStream rng(48);
  const auto data = model::sample(testing::reference_params(), 500, rng);
  const auto est = est_mom(data, 0.7);
  CHECK(std::abs(est.unit.norm() - 1.0) < 1e-12);
  CHECK((est.unit - est.raw.normalized()).norm() < 1e-12);
}

TEST_CASE("too few rows") {
  const model::DataSet tiny{Matrix::Random(3, 3), std::nullopt};
  CHECK(kind_of([&] { est_tobi(tiny); }) == ErrorKind::kInsufficientData);
  CHECK(kind_of([&] { est_jade3(tiny); }) == ErrorKind::kInsufficientData);
}

TEST_CASE("tobi flags a tied leading eigenvalue") {
  // Two orthogonal skewed directions of equal strength.
  moments::TkSet tk;
  for (Eigen::Index k = 0; k < 3; ++k) {
    Matrix s = Matrix::Zero(3, 3);
    if (k < 2) s(k, k) = 1.0;
    tk.slices.push_back(s);
  }
  const auto est = tobi_direction(SpdMatrix(Matrix::Identity(3, 3)), tk);
  CHECK(est.ambiguous_leading_eigenvalue);
  CHECK(std::abs(est.unit.norm() - 1.0) < 1e-12);

  tk.slices[0](0, 0) = 2.0;
  CHECK_FALSE(tobi_direction(SpdMatrix(Matrix::Identity(3, 3)), tk)
                  .ambiguous_leading_eigenvalue);
}

TEST_CASE("lda examples and errors") {
  // Class means (0,0) and (2,0), pooled covariance I.
  Matrix x(8, 2);
  x << 1, 1, -1, -1, 1, -1, -1, 1, 3, 1, 1, -1, 3, -1, 1, 1;
  Eigen::VectorXi labels(8);
  labels << -1, -1, -1, -1, 1, 1, 1, 1;
  const model::DataSet data{x, labels};
  const auto est = est_lda(data);
  CHECK((est.unit - Vector::Unit(2, 0)).norm() < 1e-12);
  CHECK(est.raw(0) == doctest::Approx(2.0));

  const model::DataSet swapped{x, Eigen::VectorXi(-labels)};
  const auto flipped = est_lda(swapped);
  CHECK((flipped.raw + est.raw).norm() < 1e-12);

  CHECK(kind_of([&] { est_lda(model::DataSet{x, std::nullopt}); }) ==
        ErrorKind::kSupervisionRequired);

  Matrix flat(6, 2);
  flat << 0, 0, 1, 0, 2, 0, 5, 0, 6, 0, 7, 0;
  Eigen::VectorXi flat_labels(6);
  flat_labels << -1, -1, -1, 1, 1, 1;
  CHECK(kind_of([&] { est_lda(model::DataSet{flat, flat_labels}); }) ==
        ErrorKind::kNearSingularCovariance);
}

TEST_CASE("align_sign") {
  DirectionEstimate est;
  est.raw = est.unit = -Vector::Unit(2, 0);
  const auto a = align_sign(est, Vector::Unit(2, 0));
  CHECK((a.unit - Vector::Unit(2, 0)).norm() == 0.0);
  CHECK((a.raw - Vector::Unit(2, 0)).norm() == 0.0);
  CHECK(a.sign_reference_applied);

  est.raw = est.unit = Vector::Unit(2, 0);
  CHECK((align_sign(est, Vector::Unit(2, 0)).unit - Vector::Unit(2, 0)).norm() == 0.0);

  est.raw = est.unit = Vector::Unit(2, 1);
  const auto orth = align_sign(est, Vector::Unit(2, 0));
  CHECK((orth.unit - Vector::Unit(2, 1)).norm() == 0.0);
  CHECK(orth.sign_reference_applied);

  CHECK(kind_of([&] { align_sign(est, Vector::Zero(2)); }) == ErrorKind::kDomain);
}

TEST_CASE("estimate dispatch") {
  RandomStream rng(49);
  const auto data = model::sample(testing::reference_params(), 400, rng);
  CHECK(kind_of([&] { estimate(Method::kMom, data, std::nullopt, {}, rng); }) ==
        ErrorKind::kUsage);
  CHECK(estimate(Method::kLda, data, std::nullopt, {}, rng).method == Method::kLda);
  CHECK(estimate(Method::kPp, data, std::nullopt, {}, rng).method == Method::kPp);
}

TEST_CASE("median MSI improves with n for every estimator") {
  const auto params = simulation_params(8.0);
  const Vector truth = model::derive(params).theta;
  const std::vector<Eigen::Index> sizes{500, 2000, 8000};
  std::map<Method, std::vector<double>> medians;
  for (Eigen::Index n : sizes) {
    std::map<Method, std::vector<double>> scores;
    for (std::uint64_t rep = 0; rep < 50; ++rep) {
      RandomStream rng(1000 + static_cast<std::uint64_t>(n), rep);
      const auto data = model::sample(params, n, rng);
      for (Method m : {Method::kMom, Method::kSkewvec, Method::kTobi, Method::kJade3,
                       Method::kLda, Method::kPp}) {
        const auto est = estimate(m, data, 0.7, {}, rng);
        scores[m].push_back(msi_of(est.unit, truth));
      }
    }
    for (auto& [m, v] : scores) medians[m].push_back(median(v));
  }
  for (const auto& [m, v] : medians) {
    CAPTURE(method_name(m));
    CHECK(v[0] <= v[1]);
    CHECK(v[1] <= v[2]);
  }
}

TEST_CASE("projection pursuit recovers the direction on model data") {
  const auto params = simulation_params(8.0);
  const Vector truth = model::derive(params).theta;
  int good = 0;
  for (std::uint64_t rep = 0; rep < 100; ++rep) {
    RandomStream rng(77, rep);
    const auto data = model::sample(params, 2000, rng);
    good += msi_of(est_pp(data, {}, rng).unit, truth) > 0.9;
  }
  CHECK(good >= 90);
}
