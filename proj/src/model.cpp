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

#include "skewlda/model.hpp"

#include <cmath>
#include <sstream>

#include "skewlda/error.hpp"

namespace skewlda::model {

MixtureParams::MixtureParams(double alpha1, Vector mu1, Vector mu2,
                             SpdMatrix sigma)
    : alpha1_(alpha1),
      mu1_(std::move(mu1)),
      mu2_(std::move(mu2)),
      sigma_(std::move(sigma)) {
  if (!(alpha1_ > 0.5 && alpha1_ < 1.0)) {
    std::ostringstream os;
    os << "alpha1 must lie in (0.5, 1), got " << alpha1_
       << "; the symmetric case alpha1 = alpha2 has zero skewness";
    throw Error(ErrorKind::kInvalidWeight, os.str());
  }
  if (mu1_.size() == 0 || mu1_.size() != mu2_.size() ||
      sigma_.dim() != mu1_.size()) {
    throw Error(ErrorKind::kDimension, "MixtureParams: inconsistent dimensions");
  }
  if (mu1_ == mu2_) {
    throw Error(ErrorKind::kDomain, "MixtureParams: mu1 and mu2 must differ");
  }
}

MixtureParams MixtureParams::centered(double alpha1, const Vector& h,
                                      SpdMatrix sigma) {
  return MixtureParams(alpha1, -(1.0 - alpha1) * h, alpha1 * h, std::move(sigma));
}

DerivedParams derive(const MixtureParams& params) {
  const Matrix& sigma = params.sigma().matrix();
  DerivedParams d;
  d.h = params.h();
  d.theta = sigma.llt().solve(d.h);
  d.tau = d.h.dot(d.theta);
  d.beta = params.alpha1() * params.alpha2();
  d.gamma = params.alpha1() - params.alpha2();
  d.delta = 1.0 / std::sqrt(1.0 + d.beta * d.tau);
  d.m = linalg::inv_sqrt(params.sigma()).matrix() * d.h;
  d.w = d.m.normalized();
  return d;
}

DataSet sample(const MixtureParams& params, Eigen::Index n, RandomStream& rng) {
  if (n < 1) throw Error(ErrorKind::kInsufficientData, "sample: n must be >= 1");
  const Eigen::Index p = params.dim();
  const Matrix chol = params.sigma().matrix().llt().matrixL();
  DataSet data;
  data.observations.resize(n, p);
  data.labels = Eigen::VectorXi(n);
  Vector z(p);
  for (Eigen::Index i = 0; i < n; ++i) {
    const bool first = rng.uniform() < params.alpha1();
    for (Eigen::Index j = 0; j < p; ++j) z(j) = rng.normal();
    const Vector& mu = first ? params.mu1() : params.mu2();
    data.observations.row(i) = (mu + chol * z).transpose();
    (*data.labels)(i) = first ? -1 : 1;
  }
  return data;
}

PopulationMoments population_moments(const MixtureParams& params) {
  using linalg::kron;
  const Eigen::Index p = params.dim();
  const Matrix& s = params.sigma().matrix();
  const Vector h = params.h();
  const double a1 = params.alpha1();
  const double b = a1 * params.alpha2();
  const double g = a1 - params.alpha2();
  const double bg = b * g;

  const Matrix eye = Matrix::Identity(p, p);
  const Matrix hh = h * h.transpose();
  const Matrix s2 = s * s;
  const double nh2 = h.squaredNorm();
  const double tr = s.trace();
  const double tr_s2 = s2.trace();
  const double hsh = h.dot(s * h);
  const Vector hkh = kron(h, h);            // h (x) h, p^2
  const Matrix hkh_ht = hkh * h.transpose();  // (h (x) h) h', p^2 x p

  PopulationMoments pm;
  pm.c2 = s + b * hh;
  pm.c3 = bg * nh2 * h;
  pm.cov_x_xkronx = bg * h * hkh.transpose();

  pm.cov_x_xxtx = tr * s + 2.0 * s2 + 2.0 * b * hh * s + 2.0 * b * s * hh +
                  b * nh2 * s + b * tr * hh + b * (1.0 - 3.0 * b) * nh2 * hh;

  const Matrix k = linalg::commutation_matrix(p);
  const Matrix eye_p2 = Matrix::Identity(p * p, p * p);
  pm.cov_xkronx = (eye_p2 + k) * (kron(s, s) + b * kron(hh, s) + b * kron(s, hh)) +
                  b * (1.0 - 4.0 * b) * kron(hh, hh);

  pm.cov_xkronx_xxtx = bg * (tr + (1.0 - 3.0 * b) * nh2) * hkh_ht +
                       2.0 * bg * (kron(eye, s) + kron(s, eye)) * hkh_ht +
                       2.0 * bg * hkh_ht * s + bg * nh2 * kron(Matrix(h), s) +
                       bg * nh2 * kron(s, Matrix(h));

  const Matrix inner = tr * s + 2.0 * s2 + 2.0 * b * hh * s + b * tr * hh +
                       2.0 * b * s * hh + bg * nh2 * hh + b * nh2 * s;
  pm.cov_xxtx = 4.0 * b * tr * s * hh + 8.0 * b * s2 * hh +
                4.0 * bg * nh2 * s * hh +
                (2.0 * tr_s2 + tr * tr) * (s + b * hh) + 4.0 * inner * s +
                b * (2.0 * tr * nh2 + 4.0 * hsh) * (s + (1.0 - 3.0 * b) * hh) +
                b * (1.0 - 3.0 * b) * nh2 * nh2 * (s + (1.0 - 3.0 * b) * hh);
  return pm;
}

WhitenedLaw whitened_population(const MixtureParams& params) {
  const DerivedParams d = derive(params);
  const Eigen::Index p = params.dim();
  const double shrink = d.beta * d.tau / (1.0 + d.beta * d.tau);
  WhitenedLaw law;
  law.alpha1 = params.alpha1();
  law.alpha2 = params.alpha2();
  law.separation = std::sqrt(d.tau / (1.0 + d.beta * d.tau));
  law.mean1 = -law.alpha2 * law.separation * d.w;
  law.mean2 = law.alpha1 * law.separation * d.w;
  law.within_cov = Matrix::Identity(p, p) - shrink * d.w * d.w.transpose();
  return law;
}

Matrix WhitenedLaw::total_covariance() const {
  const Vector diff = mean2 - mean1;
  return within_cov + alpha1 * alpha2 * diff * diff.transpose();
}

double WhitenedLaw::standardized_distance() const {
  const Vector diff = mean2 - mean1;
  return diff.dot(within_cov.ldlt().solve(diff));
}

}  // namespace skewlda::model
