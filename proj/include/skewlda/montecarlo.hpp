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

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "skewlda/estimators.hpp"
#include "skewlda/linalg.hpp"
#include "skewlda/random.hpp"

namespace skewlda::montecarlo {

using estimators::Method;

enum class SigmaMode { kIdentity, kRandomAAt };

/// Environment variable consulted for the default worker count.
inline constexpr const char* kThreadsEnv = "SKEWLDA_THREADS";

struct ExperimentConfig {
  Eigen::Index p = 3;
  std::vector<double> alpha_grid;
  std::vector<double> tau_grid;
  std::vector<Eigen::Index> n_grid;
  int reps = 2;
  std::uint64_t master_seed = 0;
  std::vector<Method> methods;
  SigmaMode sigma_mode = SigmaMode::kIdentity;
  /// 0 means: $SKEWLDA_THREADS, else the hardware concurrency.
  int threads = 0;
  estimators::IterationOptions iteration;
};

/// Throws kConfig naming the offending field.
void validate(const ExperimentConfig& config);

struct ReplicateResult {
  Method method;
  Eigen::Index n;
  double alpha1;
  double tau;
  int rep;
  double t_projection;  // t' theta_hat / |theta_hat|, sign aligned with h
  double msi;           // against the true theta
  bool converged;
  bool failed;          // estimator threw or did not converge; excluded
};

struct ChatRow {
  Method method;
  double alpha1;
  double tau;
  Eigen::Index n;
  int reps_used;
  int reps_failed;
  double c_hat;  // n * Var(t' theta_hat/|theta_hat|), divisor reps_used - 1
  std::optional<double> c_theory;
  bool low_precision;
};

struct MsiRow {
  Method method;
  double alpha1;
  double tau;
  Eigen::Index n;
  Eigen::Index p;
  int reps_used;
  int reps_failed;
  double mean_msi;
};

/// Below this many usable replicates c_hat is flagged low precision.
inline constexpr int kLowPrecisionReps = 100;

/// Unit t with t'h = 0: Gram-Schmidt of the basis vector least aligned with h.
Vector orth_unit(const Vector& h);

/// |u'v| / (|u||v|), in [0, 1].
double msi(const Vector& u, const Vector& v);

/// Independent stream for replicate `index` under `master_seed`.
RandomStream rng_stream(std::uint64_t master_seed, std::uint64_t index);

/// Worker count a config resolves to.
int resolve_threads(int requested);

/// Calls fn(i) for i in [0, count) on `threads` workers. fn must only write
/// to state owned by index i.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

/// Sigma = I, E(x) = 0, h = sqrt(tau) e_1. Results ordered by cell, then rep,
/// then method in config order.
std::vector<ReplicateResult> chat_replicates(const ExperimentConfig& config);

/// A fresh Sigma = A A' and a uniformly drawn h direction per replicate,
/// rescaled so that h' Sigma^{-1} h = tau.
std::vector<ReplicateResult> msi_replicates(const ExperimentConfig& config);

std::vector<ChatRow> summarize_chat(const ExperimentConfig& config,
                                    const std::vector<ReplicateResult>& results);
std::vector<MsiRow> summarize_msi(const ExperimentConfig& config,
                                  const std::vector<ReplicateResult>& results);

/// Rows sorted by (method name, alpha1, tau, n).
std::vector<ChatRow> chat_experiment(const ExperimentConfig& config);
std::vector<MsiRow> msi_experiment(const ExperimentConfig& config);

void write_chat_csv(std::ostream& os, const std::vector<ChatRow>& rows);
void write_msi_csv(std::ostream& os, const std::vector<MsiRow>& rows);

}  // namespace skewlda::montecarlo
