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

#include <optional>

#include "skewlda/estimators.hpp"
#include "skewlda/linalg.hpp"
#include "skewlda/model.hpp"

namespace skewlda::asymptotics {

/// Limiting covariance of sqrt(n)(theta_hat/|theta_hat| - theta/|theta|).
struct AsymptoticSpec {
  std::optional<double> constant_c;  // absent for the method of moments
  Matrix covariance;
  estimators::Method estimator;
};

/// Weights closer than this to 0.5 or 1 are rejected: the constants diverge.
inline constexpr double kWeightMargin = 1e-6;

/// C0 = (1 + b t)(b t^2 + 6 b t + 2) / (b^2 (1 - 4b) t^3); shared by TOBI,
/// 3-JADE and skewness projection pursuit.
double c0_constant(double alpha1, double tau);

/// C0 + 2(p + 1)(1 + b t)^4 / (b^2 (1 - 4b) t^3), the skewness-vector estimator.
double c_skewvec(double alpha1, double tau, Eigen::Index p);

/// (1 + b t) / (b t): supervised LDA, a lower bound for unsupervised methods.
double c_lda(double alpha1, double tau);

/// Constant for an affine equivariant method, or nullopt for kMom.
std::optional<double> c_constant(estimators::Method method, double alpha1, double tau,
                                 Eigen::Index p);

/// C (tau / |theta|^2) Q_theta Sigma^{-1} Q_theta.
AsymptoticSpec avar_ae(double constant_c, const model::MixtureParams& params,
                       estimators::Method method = estimators::Method::kTobi);

struct MomOmegas {
  double omega1;
  double omega2;
};

MomOmegas mom_omegas(const model::MixtureParams& params);

/// Limiting covariance of the normalised method-of-moments estimator:
/// {w1 w2 - tau(1 + b tau)/|theta|^2} Q S^{-1} Q + 4 w1 Q (S + b h h') Q.
AsymptoticSpec avar_mom(const model::MixtureParams& params);

}  // namespace skewlda::asymptotics
