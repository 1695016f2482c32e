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

#include "skewlda/linalg.hpp"
#include "skewlda/random.hpp"

namespace skewlda::model {

using linalg::SpdMatrix;

/// Two-component normal location mixture
///   alpha1 N(mu1, sigma) + (1 - alpha1) N(mu2, sigma),  0.5 < alpha1 < 1.
class MixtureParams {
 public:
  /// Throws kInvalidWeight for alpha1 outside (0.5, 1), kDimension for
  /// mismatched sizes and kDomain when mu1 == mu2.
  MixtureParams(double alpha1, Vector mu1, Vector mu2, SpdMatrix sigma);

  /// The zero-mean parametrisation mu1 = -alpha2 h, mu2 = alpha1 h.
  static MixtureParams centered(double alpha1, const Vector& h, SpdMatrix sigma);

  double alpha1() const noexcept { return alpha1_; }
  double alpha2() const noexcept { return 1.0 - alpha1_; }
  const Vector& mu1() const noexcept { return mu1_; }
  const Vector& mu2() const noexcept { return mu2_; }
  const SpdMatrix& sigma() const noexcept { return sigma_; }
  Eigen::Index dim() const noexcept { return mu1_.size(); }
  Vector h() const { return mu2_ - mu1_; }
  Vector mean() const { return alpha1_ * mu1_ + alpha2() * mu2_; }

 private:
  double alpha1_;
  Vector mu1_;
  Vector mu2_;
  SpdMatrix sigma_;
};

struct DerivedParams {
  Vector h;       // mu2 - mu1
  Vector theta;   // sigma^{-1} h
  double tau;     // h' sigma^{-1} h
  double beta;    // alpha1 alpha2
  double gamma;   // alpha1 - alpha2
  double delta;   // (1 + beta tau)^{-1/2}
  Vector w;       // m / |m|
  Vector m;       // sigma^{-1/2} h
};

DerivedParams derive(const MixtureParams& params);

/// Observations in rows. Labels are -1 (component 1) or +1 (component 2).
struct DataSet {
  Matrix observations;
  std::optional<Eigen::VectorXi> labels;

  Eigen::Index n() const noexcept { return observations.rows(); }
  Eigen::Index p() const noexcept { return observations.cols(); }
};

/// Draws n labelled observations. Consumes `rng`; the output is a function of
/// the stream state only.
DataSet sample(const MixtureParams& params, Eigen::Index n, RandomStream& rng);

/// Closed-form population moments of the centred mixture. Kronecker indices
/// follow (x (x) x)_{k p + l} = x_k x_l (zero based).
struct PopulationMoments {
  Matrix c2;                // Cov(x)                      p x p
  Vector c3;                // E(x x' x)                   p
  Matrix cov_x_xkronx;      // Cov(x, x (x) x)             p x p^2
  Matrix cov_xkronx;        // Cov(x (x) x)                p^2 x p^2
  Matrix cov_x_xxtx;        // Cov(x, x x' x)              p x p
  Matrix cov_xkronx_xxtx;   // Cov(x (x) x, x x' x)        p^2 x p
  Matrix cov_xxtx;          // Cov(x x' x)                 p x p
};

PopulationMoments population_moments(const MixtureParams& params);

/// Law of the whitened vector C2^{-1/2}(x - E x), in the canonical frame
/// where the mean difference lies along w.
struct WhitenedLaw {
  double alpha1;
  double alpha2;
  Vector mean1;
  Vector mean2;
  Matrix within_cov;
  double separation;  // |mean2 - mean1|

  Matrix total_covariance() const;
  /// sep' within_cov^{-1} sep, the standardised group distance.
  double standardized_distance() const;
};

WhitenedLaw whitened_population(const MixtureParams& params);

}  // namespace skewlda::model
