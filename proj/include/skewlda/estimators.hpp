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
#include <string>
#include <string_view>
#include <vector>

#include "skewlda/linalg.hpp"
#include "skewlda/model.hpp"
#include "skewlda/moments.hpp"
#include "skewlda/random.hpp"

namespace skewlda::estimators {

using linalg::SpdMatrix;
using model::DataSet;

enum class Method { kMom, kSkewvec, kTobi, kJade3, kLda, kPp };

std::string_view method_name(Method method) noexcept;
/// Accepts the lowercase names ("mom", "skewvec", "tobi", "jade3", "lda",
/// "pp") in any letter case. Throws kUsage otherwise.
Method parse_method(std::string_view name);
bool is_affine_equivariant(Method method) noexcept;

struct DirectionEstimate {
  Vector raw;
  Vector unit;
  Method method = Method::kTobi;
  bool converged = true;
  int iterations = 0;
  int restarts = 0;
  bool sign_reference_applied = false;
  // TOBI only: the two leading eigenvalues of T are within 1e-10 of each other.
  bool ambiguous_leading_eigenvalue = false;
  // Iterative methods: objective never dropped by more than 1e-12.
  bool objective_monotone = true;
  std::vector<double> objective_trace;
};

struct Whitening {
  SpdMatrix whitener;  // C2^{-1/2}
  Vector mean;
  Matrix whitened;     // rows C2^{-1/2}(x_i - xbar)
};

struct IterationOptions {
  /// Starting point on the unit sphere in whitened coordinates. Defaults to
  /// the TOBI direction.
  std::optional<Vector> init;
  double tol = 1e-12;
  int max_iter = 200;
  int max_restarts = 5;
};

inline constexpr double kDegeneracyFloor = 1e-10;
inline constexpr double kUpdateUnderflow = 1e-300;
inline constexpr double kEigenGapTolerance = 1e-10;

Whitening whiten(const DataSet& data);
Whitening whiten(const Matrix& observations);

// Data-level estimators. All of them need n >= p + 1.

DirectionEstimate est_mom(const DataSet& data, double alpha1);
DirectionEstimate est_skewvec(const DataSet& data);
DirectionEstimate est_tobi(const DataSet& data);
DirectionEstimate est_jade3(const DataSet& data, const IterationOptions& opts,
                            RandomStream& rng);
DirectionEstimate est_jade3(const DataSet& data, const IterationOptions& opts = {});
DirectionEstimate est_lda(const DataSet& data);
/// Experimental: fixed point u <- E{(u'z)^2 z} / |.| on whitened z, a
/// stationary point of the squared projection skewness.
DirectionEstimate est_pp(const DataSet& data, const IterationOptions& opts,
                         RandomStream& rng);
DirectionEstimate est_pp(const DataSet& data, const IterationOptions& opts = {});

/// Runs `method` with default options. `alpha1` is required for kMom.
DirectionEstimate estimate(Method method, const DataSet& data,
                           std::optional<double> alpha1, const IterationOptions& opts,
                           RandomStream& rng);

// Moment-level cores. The data-level estimators are thin wrappers around
// these, which also accept exact population moments.

DirectionEstimate mom_direction(const Matrix& c2, const Vector& c3, double alpha1);
DirectionEstimate skewvec_direction(const SpdMatrix& whitener,
                                    const Vector& c3_whitened);
DirectionEstimate tobi_direction(const SpdMatrix& whitener, const moments::TkSet& tk);
DirectionEstimate jade3_direction(const SpdMatrix& whitener, const moments::TkSet& tk,
                                  const IterationOptions& opts, RandomStream& rng);
DirectionEstimate pp_direction(const SpdMatrix& whitener, const moments::TkSet& tk,
                               const IterationOptions& opts, RandomStream& rng);
/// raw = Sw^{-1}(mean_plus - mean_minus).
DirectionEstimate lda_direction(const Matrix& pooled_within, const Vector& mean_minus,
                                const Vector& mean_plus);

/// sum_k (u' T_k u)^2.
double jade3_objective(const moments::TkSet& tk, const Vector& u);

/// Flips the estimate so that unit' reference >= 0.
DirectionEstimate align_sign(DirectionEstimate est, const Vector& reference);

}  // namespace skewlda::estimators
