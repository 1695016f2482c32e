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

#include "skewlda/estimators.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <sstream>

#include "skewlda/error.hpp"

namespace skewlda::estimators {

std::string_view method_name(Method method) noexcept {
  switch (method) {
    case Method::kMom: return "mom";
    case Method::kSkewvec: return "skewvec";
    case Method::kTobi: return "tobi";
    case Method::kJade3: return "jade3";
    case Method::kLda: return "lda";
    case Method::kPp: return "pp";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  for (Method m : {Method::kMom, Method::kSkewvec, Method::kTobi, Method::kJade3,
                   Method::kLda, Method::kPp}) {
    if (lower == method_name(m)) return m;
  }
  throw Error(ErrorKind::kUsage, "unknown method '" + std::string(name) + "'");
}

bool is_affine_equivariant(Method method) noexcept {
  return method != Method::kMom;
}

namespace {

DirectionEstimate make_estimate(Vector raw, Method method) {
  const double norm = raw.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(ErrorKind::kDegenerateSkewness,
                std::string(method_name(method)) + ": estimate has zero or non-finite norm");
  }
  DirectionEstimate est;
  est.unit = raw / norm;
  est.raw = std::move(raw);
  est.method = method;
  return est;
}

void require_rows(Eigen::Index n, Eigen::Index p) {
  if (n < p + 1) {
    std::ostringstream os;
    os << "need at least p + 1 = " << p + 1 << " observations, got " << n;
    throw Error(ErrorKind::kInsufficientData, os.str());
  }
}

void require_weight(double alpha1) {
  if (!(alpha1 > 0.5 && alpha1 < 1.0)) {
    std::ostringstream os;
    os << "alpha1 must lie in (0.5, 1), got " << alpha1;
    throw Error(ErrorKind::kInvalidWeight, os.str());
  }
}

// Whitened data has trace p, so the floor is kDegeneracyFloor * p^{3/2}.
void require_skewed_tensor(const moments::TkSet& tk, Method method) {
  const double p = static_cast<double>(tk.dim());
  if (tk.dim() == 0 || !(moments::tensor_norm(tk) >= kDegeneracyFloor * std::pow(p, 1.5))) {
    throw Error(ErrorKind::kDegenerateSkewness,
                std::string(method_name(method)) +
                    ": third moments vanish, the sample looks symmetric");
  }
}

using Update = std::function<Vector(const Vector&)>;
using Objective = std::function<double(const Vector&)>;

// Normalised fixed-point iteration shared by 3-JADE and projection pursuit.
DirectionEstimate fixed_point(const SpdMatrix& whitener, Vector u,
                              const IterationOptions& opts, RandomStream& rng,
                              const Update& update, const Objective& objective,
                              Method method) {
  const Eigen::Index p = whitener.dim();
  DirectionEstimate est;
  est.method = method;
  est.converged = false;
  double obj = objective(u);
  est.objective_trace.push_back(obj);
  while (est.iterations < opts.max_iter) {
    Vector next = update(u);
    ++est.iterations;
    const double norm = next.norm();
    if (!(norm >= kUpdateUnderflow)) {
      if (est.restarts >= opts.max_restarts) break;
      ++est.restarts;
      u = rng.unit_vector(p);
      obj = objective(u);
      est.objective_trace.push_back(obj);
      continue;
    }
    next /= norm;
    const double next_obj = objective(next);
    if (next_obj < obj - 1e-12) est.objective_monotone = false;
    est.objective_trace.push_back(next_obj);
    const double change = 1.0 - std::abs(next.dot(u));
    u = std::move(next);
    obj = next_obj;
    if (change < opts.tol) {
      est.converged = true;
      break;
    }
  }
  est.raw = whitener.matrix() * u;
  est.unit = est.raw.normalized();
  return est;
}

Vector initial_direction(const moments::TkSet& tk, const IterationOptions& opts) {
  if (!opts.init) return linalg::sym_eigen(moments::tobi_matrix(tk)).front().vector;
  if (opts.init->size() != tk.dim()) {
    throw Error(ErrorKind::kDimension, "init has the wrong dimension");
  }
  const double norm = opts.init->norm();
  if (!(norm > 0.0)) throw Error(ErrorKind::kDomain, "init must be non-zero");
  return *opts.init / norm;
}

}  // namespace

Whitening whiten(const Matrix& x) {
  const auto mom = moments::sample_moments(x);
  const SpdMatrix c2 = [&] {
    try {
      return SpdMatrix(mom.c2_hat);
    } catch (const Error& e) {
      throw Error(ErrorKind::kNearSingularCovariance,
                  std::string("whiten: sample covariance is singular: ") + e.what());
    }
  }();
  Whitening w{linalg::inv_sqrt(c2), mom.mean, Matrix()};
  w.whitened = (x.rowwise() - mom.mean.transpose()) * w.whitener.matrix();
  return w;
}

Whitening whiten(const DataSet& data) { return whiten(data.observations); }

DirectionEstimate mom_direction(const Matrix& c2, const Vector& c3, double alpha1) {
  require_weight(alpha1);
  const double beta = alpha1 * (1.0 - alpha1);
  const double gamma = 2.0 * alpha1 - 1.0;
  const double norm = c3.norm();
  const double floor = kDegeneracyFloor * std::pow(std::max(c2.trace(), 0.0), 1.5);
  if (!(norm >= floor) || norm == 0.0) {
    throw Error(ErrorKind::kDegenerateSkewness,
                "mom: third-moment vector vanishes, the sample looks symmetric");
  }
  const Matrix inner = c2 - std::cbrt(beta) * std::pow(gamma, -2.0 / 3.0) *
                                std::pow(norm, -4.0 / 3.0) * c3 * c3.transpose();
  const Vector rhs = std::pow(beta * gamma, -1.0 / 3.0) * std::pow(norm, -2.0 / 3.0) * c3;
  Eigen::FullPivLU<Matrix> lu(inner);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) {
    throw Error(ErrorKind::kSingularMatrix, "mom: C2 - k c3 c3' is singular");
  }
  return make_estimate(lu.solve(rhs), Method::kMom);
}

DirectionEstimate skewvec_direction(const SpdMatrix& whitener, const Vector& c3w) {
  const double p = static_cast<double>(c3w.size());
  if (!(c3w.norm() >= kDegeneracyFloor * std::pow(p, 1.5))) {
    throw Error(ErrorKind::kDegenerateSkewness,
                "skewvec: whitened skewness vector vanishes, the sample looks symmetric");
  }
  return make_estimate(whitener.matrix() * c3w, Method::kSkewvec);
}

DirectionEstimate tobi_direction(const SpdMatrix& whitener, const moments::TkSet& tk) {
  require_skewed_tensor(tk, Method::kTobi);
  const auto pairs = linalg::sym_eigen(moments::tobi_matrix(tk));
  auto est = make_estimate(whitener.matrix() * pairs.front().vector, Method::kTobi);
  if (pairs.size() > 1 &&
      pairs[0].value - pairs[1].value <= kEigenGapTolerance * std::max(1.0, pairs[0].value)) {
    est.ambiguous_leading_eigenvalue = true;
  }
  return est;
}

double jade3_objective(const moments::TkSet& tk, const Vector& u) {
  double sum = 0.0;
  for (const auto& s : tk.slices) {
    const double q = u.dot(s * u);
    sum += q * q;
  }
  return sum;
}

DirectionEstimate jade3_direction(const SpdMatrix& whitener, const moments::TkSet& tk,
                                  const IterationOptions& opts, RandomStream& rng) {
  require_skewed_tensor(tk, Method::kJade3);
  const Update update = [&tk](const Vector& u) {
    Vector next = Vector::Zero(u.size());
    for (const auto& s : tk.slices) {
      const Vector su = s * u;
      next += u.dot(su) * su;
    }
    return next;
  };
  const Objective objective = [&tk](const Vector& u) { return jade3_objective(tk, u); };
  return fixed_point(whitener, initial_direction(tk, opts), opts, rng, update, objective,
                     Method::kJade3);
}

DirectionEstimate pp_direction(const SpdMatrix& whitener, const moments::TkSet& tk,
                               const IterationOptions& opts, RandomStream& rng) {
  require_skewed_tensor(tk, Method::kPp);
  // E{(u'z)^2 z}_k = u' T_k u.
  const Update update = [&tk](const Vector& u) {
    Vector next(u.size());
    for (Eigen::Index k = 0; k < u.size(); ++k) next(k) = u.dot(tk.slices[k] * u);
    return next;
  };
  const Objective objective = [&update](const Vector& u) {
    const double skew = u.dot(update(u));
    return skew * skew;
  };
  return fixed_point(whitener, initial_direction(tk, opts), opts, rng, update, objective,
                     Method::kPp);
}

DirectionEstimate lda_direction(const Matrix& pooled_within, const Vector& mean_minus,
                                const Vector& mean_plus) {
  const SpdMatrix sw = [&] {
    try {
      return SpdMatrix(pooled_within);
    } catch (const Error& e) {
      throw Error(ErrorKind::kNearSingularCovariance,
                  std::string("lda: pooled within-class covariance is singular: ") + e.what());
    }
  }();
  const auto pairs = linalg::sym_eigen(sw.matrix());
  if (!(pairs.back().value > linalg::kSingularityFloor * pairs.front().value)) {
    throw Error(ErrorKind::kNearSingularCovariance,
                "lda: pooled within-class covariance is near singular");
  }
  return make_estimate(sw.matrix().ldlt().solve(mean_plus - mean_minus), Method::kLda);
}

DirectionEstimate est_mom(const DataSet& data, double alpha1) {
  require_weight(alpha1);
  require_rows(data.n(), data.p());
  const auto mom = moments::sample_moments(data);
  return mom_direction(mom.c2_hat, mom.c3_hat, alpha1);
}

DirectionEstimate est_skewvec(const DataSet& data) {
  require_rows(data.n(), data.p());
  const auto w = whiten(data);
  const auto c3w = moments::sample_moments(w.whitened).c3_hat;
  return skewvec_direction(w.whitener, c3w);
}

DirectionEstimate est_tobi(const DataSet& data) {
  require_rows(data.n(), data.p());
  const auto w = whiten(data);
  return tobi_direction(w.whitener, moments::tk_slices(w.whitened));
}

DirectionEstimate est_jade3(const DataSet& data, const IterationOptions& opts,
                            RandomStream& rng) {
  require_rows(data.n(), data.p());
  const auto w = whiten(data);
  return jade3_direction(w.whitener, moments::tk_slices(w.whitened), opts, rng);
}

DirectionEstimate est_jade3(const DataSet& data, const IterationOptions& opts) {
  RandomStream rng;
  return est_jade3(data, opts, rng);
}

DirectionEstimate est_pp(const DataSet& data, const IterationOptions& opts,
                         RandomStream& rng) {
  require_rows(data.n(), data.p());
  const auto w = whiten(data);
  return pp_direction(w.whitener, moments::tk_slices(w.whitened), opts, rng);
}

DirectionEstimate est_pp(const DataSet& data, const IterationOptions& opts) {
  RandomStream rng;
  return est_pp(data, opts, rng);
}

DirectionEstimate est_lda(const DataSet& data) {
  if (!data.labels) {
    throw Error(ErrorKind::kSupervisionRequired, "lda: group labels are required");
  }
  const auto& labels = *data.labels;
  if (labels.size() != data.n()) {
    throw Error(ErrorKind::kDimension, "lda: label count does not match rows");
  }
  const Eigen::Index p = data.p();
  Vector sum_minus = Vector::Zero(p), sum_plus = Vector::Zero(p);
  Eigen::Index n_minus = 0, n_plus = 0;
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    if (labels(i) == -1) {
      sum_minus += data.observations.row(i).transpose();
      ++n_minus;
    } else if (labels(i) == 1) {
      sum_plus += data.observations.row(i).transpose();
      ++n_plus;
    } else {
      throw Error(ErrorKind::kDomain, "lda: labels must be -1 or +1");
    }
  }
  if (n_minus < 2 || n_plus < 2) {
    throw Error(ErrorKind::kInsufficientData, "lda: each class needs at least 2 rows");
  }
  const Vector mean_minus = sum_minus / static_cast<double>(n_minus);
  const Vector mean_plus = sum_plus / static_cast<double>(n_plus);
  Matrix centered = data.observations;
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    centered.row(i) -= (labels(i) == -1 ? mean_minus : mean_plus).transpose();
  }
  Matrix sw = centered.transpose() * centered / static_cast<double>(data.n());
  sw = 0.5 * (sw + sw.transpose()).eval();
  return lda_direction(sw, mean_minus, mean_plus);
}

DirectionEstimate estimate(Method method, const DataSet& data,
                           std::optional<double> alpha1, const IterationOptions& opts,
                           RandomStream& rng) {
  switch (method) {
    case Method::kMom:
      if (!alpha1) throw Error(ErrorKind::kUsage, "mom requires alpha1");
      return est_mom(data, *alpha1);
    case Method::kSkewvec: return est_skewvec(data);
    case Method::kTobi: return est_tobi(data);
    case Method::kJade3: return est_jade3(data, opts, rng);
    case Method::kLda: return est_lda(data);
    case Method::kPp: return est_pp(data, opts, rng);
  }
  throw Error(ErrorKind::kUsage, "unknown method");
}

DirectionEstimate align_sign(DirectionEstimate est, const Vector& reference) {
  if (!(reference.norm() > 0.0)) {
    throw Error(ErrorKind::kDomain, "align_sign: reference must be non-zero");
  }
  if (est.unit.dot(reference) < 0.0) {
    est.unit = -est.unit;
    est.raw = -est.raw;
  }
  est.sign_reference_applied = true;
  return est;
}

}  // namespace skewlda::estimators
