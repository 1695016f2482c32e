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

#include "skewlda/asymptotics.hpp"

#include <cmath>
#include <sstream>

#include "skewlda/error.hpp"

namespace skewlda::asymptotics {

namespace {

double checked_beta(double alpha1, double tau) {
  if (!(alpha1 > 0.5 + kWeightMargin && alpha1 < 1.0 - kWeightMargin)) {
    std::ostringstream os;
    os << "alpha1 = " << alpha1
       << " is outside (0.5, 1); the constants diverge at alpha1 = alpha2 and "
          "are undefined at the boundary";
    throw Error(ErrorKind::kDivergence, os.str());
  }
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw Error(ErrorKind::kDomain, "tau must be positive and finite");
  }
  return alpha1 * (1.0 - alpha1);
}

}  // namespace

double c0_constant(double alpha1, double tau) {
  const double b = checked_beta(alpha1, tau);
  return (1.0 + b * tau) * (b * tau * tau + 6.0 * b * tau + 2.0) /
         (b * b * (1.0 - 4.0 * b) * tau * tau * tau);
}

double c_skewvec(double alpha1, double tau, Eigen::Index p) {
  if (p < 1) throw Error(ErrorKind::kDimension, "c_skewvec: p must be positive");
  const double b = checked_beta(alpha1, tau);
  const double q = 1.0 + b * tau;
  return c0_constant(alpha1, tau) +
         2.0 * static_cast<double>(p + 1) * q * q * q * q /
             (b * b * (1.0 - 4.0 * b) * tau * tau * tau);
}

double c_lda(double alpha1, double tau) {
  const double b = checked_beta(alpha1, tau);
  return (1.0 + b * tau) / (b * tau);
}

std::optional<double> c_constant(estimators::Method method, double alpha1, double tau,
                                 Eigen::Index p) {
  using estimators::Method;
  switch (method) {
    case Method::kTobi:
    case Method::kJade3:
    case Method::kPp: return c0_constant(alpha1, tau);
    case Method::kSkewvec: return c_skewvec(alpha1, tau, p);
    case Method::kLda: return c_lda(alpha1, tau);
    case Method::kMom: return std::nullopt;
  }
  return std::nullopt;
}

namespace {

// Q_theta Sigma^{-1} Q_theta, symmetrised.
Matrix projected_precision(const model::DerivedParams& d, const Matrix& sigma) {
  const auto proj = linalg::projector_pair(d.theta);
  const Matrix precision = sigma.llt().solve(Matrix::Identity(sigma.rows(), sigma.cols()));
  Matrix out = proj.q * precision * proj.q;
  return 0.5 * (out + out.transpose());
}

}  // namespace

AsymptoticSpec avar_ae(double constant_c, const model::MixtureParams& params,
                       estimators::Method method) {
  if (!(constant_c > 0.0)) throw Error(ErrorKind::kDomain, "avar_ae: C must be positive");
  const auto d = model::derive(params);
  const Matrix shape = projected_precision(d, params.sigma().matrix());
  return {constant_c, constant_c * d.tau / d.theta.squaredNorm() * shape, method};
}

MomOmegas mom_omegas(const model::MixtureParams& params) {
  const auto d = model::derive(params);
  const Matrix& s = params.sigma().matrix();
  const double b = d.beta;
  const double h2 = d.h.squaredNorm();
  const double q = 1.0 + b * d.tau;
  // The printed denominator "|theta^2|" is read as |theta|^2.
  const double omega1 = q * q / (h2 * h2 * b * b * (1.0 - 4.0 * b) * d.theta.squaredNorm());
  const double omega2 = 2.0 * (s * s).trace() + 4.0 * b * d.h.dot(s * d.h) +
                        b * (1.0 - 4.0 * b) * h2 * h2;
  return {omega1, omega2};
}

AsymptoticSpec avar_mom(const model::MixtureParams& params) {
  const auto d = model::derive(params);
  const Matrix& s = params.sigma().matrix();
  const auto [w1, w2] = mom_omegas(params);
  const auto proj = linalg::projector_pair(d.theta);
  const Matrix shape = projected_precision(d, s);
  const double lead = w1 * w2 - d.tau * (1.0 + d.beta * d.tau) / d.theta.squaredNorm();
  Matrix second = proj.q * (s + d.beta * d.h * d.h.transpose()) * proj.q;
  second = 0.5 * (second + second.transpose()).eval();
  return {std::nullopt, lead * shape + 4.0 * w1 * second, estimators::Method::kMom};
}

}  // namespace skewlda::asymptotics
