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

#include "skewlda/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <limits>
#include <map>
#include <ostream>
#include <string>
#include <thread>
#include <tuple>

#include "skewlda/asymptotics.hpp"
#include "skewlda/error.hpp"
#include "skewlda/model.hpp"

namespace skewlda::montecarlo {

namespace {

[[noreturn]] void config_error(const std::string& field, const std::string& why) {
  throw Error(ErrorKind::kConfig, "config field '" + field + "': " + why);
}

}  // namespace

void validate(const ExperimentConfig& c) {
  if (c.p < 2) config_error("p", "must be >= 2");
  if (c.alpha_grid.empty()) config_error("alpha_grid", "must not be empty");
  for (double a : c.alpha_grid) {
    if (!(a > 0.5 && a < 1.0)) config_error("alpha_grid", "values must lie in (0.5, 1)");
  }
  if (c.tau_grid.empty()) config_error("tau_grid", "must not be empty");
  for (double t : c.tau_grid) {
    if (!(t > 0.0) || !std::isfinite(t)) config_error("tau_grid", "values must be > 0");
  }
  if (c.n_grid.empty()) config_error("n_grid", "must not be empty");
  for (auto n : c.n_grid) {
    if (n < c.p + 1) config_error("n_grid", "values must be >= p + 1");
  }
  if (c.reps < 2) config_error("reps", "must be >= 2");
  if (c.methods.empty()) config_error("methods", "must not be empty");
  if (c.threads < 0) config_error("threads", "must be >= 0");
  if (!(c.iteration.tol > 0.0)) config_error("tol", "must be > 0");
  if (c.iteration.max_iter < 1) config_error("max_iter", "must be >= 1");
}

Vector orth_unit(const Vector& h) {
  const Eigen::Index p = h.size();
  if (p < 2) throw Error(ErrorKind::kDimension, "orth_unit: p must be >= 2");
  const double sq = h.squaredNorm();
  if (!(sq > 0.0)) throw Error(ErrorKind::kDomain, "orth_unit: h must be non-zero");
  Eigen::Index j = 0;
  for (Eigen::Index i = 1; i < p; ++i) {
    if (std::abs(h(i)) < std::abs(h(j))) j = i;
  }
  Vector t = -(h(j) / sq) * h;
  t(j) += 1.0;
  return t.normalized();
}

double msi(const Vector& u, const Vector& v) {
  const double nu = u.norm();
  const double nv = v.norm();
  if (!(nu > 0.0) || !(nv > 0.0)) throw Error(ErrorKind::kDomain, "msi: zero vector");
  return std::clamp(std::abs(u.dot(v)) / (nu * nv), 0.0, 1.0);
}

RandomStream rng_stream(std::uint64_t master_seed, std::uint64_t index) {
  return RandomStream(master_seed, index);
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv(kThreadsEnv)) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& fn) {
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count || failed.load()) return;
      try {
        fn(i);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(std::min(workers, count));
  for (std::size_t w = 0; w < std::min(workers, count); ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

namespace {

struct Cell {
  double alpha1;
  double tau;
  Eigen::Index n;
};

std::vector<Cell> cells_of(const ExperimentConfig& c) {
  std::vector<Cell> cells;
  for (double a : c.alpha_grid)
    for (double t : c.tau_grid)
      for (auto n : c.n_grid) cells.push_back({a, t, n});
  return cells;
}

struct Truth {
  model::MixtureParams params;
  Vector h;
  Vector theta;
};

// Runs every configured method on one dataset and writes one result per
// method into `out`.
void run_methods(const ExperimentConfig& c, const Cell& cell, int rep, const Truth& truth,
                 const model::DataSet& data, RandomStream& rng, const Vector& t,
                 ReplicateResult* out) {
  for (std::size_t m = 0; m < c.methods.size(); ++m) {
    ReplicateResult r{c.methods[m], cell.n, cell.alpha1, cell.tau, rep,
                      std::numeric_limits<double>::quiet_NaN(),
                      std::numeric_limits<double>::quiet_NaN(), false, true};
    try {
      auto est = estimators::estimate(c.methods[m], data, truth.params.alpha1(),
                                      c.iteration, rng);
      est = estimators::align_sign(std::move(est), truth.h);
      r.converged = est.converged;
      r.failed = !est.converged;
      r.t_projection = t.dot(est.unit);
      r.msi = msi(est.unit, truth.theta);
    } catch (const Error&) {
      r.failed = true;
    }
    out[m] = r;
  }
}

std::vector<ReplicateResult> failed_block(const ExperimentConfig& c, const Cell& cell,
                                          int rep) {
  std::vector<ReplicateResult> out;
  for (auto m : c.methods) {
    out.push_back({m, cell.n, cell.alpha1, cell.tau, rep,
                   std::numeric_limits<double>::quiet_NaN(),
                   std::numeric_limits<double>::quiet_NaN(), false, true});
  }
  return out;
}

template <class Replicate>
std::vector<ReplicateResult> run_all(const ExperimentConfig& c, Replicate&& replicate) {
  validate(c);
  const auto cells = cells_of(c);
  const std::size_t reps = static_cast<std::size_t>(c.reps);
  const std::size_t k = c.methods.size();
  std::vector<ReplicateResult> results(cells.size() * reps * k);
  parallel_for(cells.size() * reps, resolve_threads(c.threads), [&](std::size_t item) {
    const Cell& cell = cells[item / reps];
    const int rep = static_cast<int>(item % reps);
    RandomStream rng = rng_stream(c.master_seed, item);
    replicate(cell, rep, rng, &results[item * k]);
  });
  return results;
}

}  // namespace

std::vector<ReplicateResult> chat_replicates(const ExperimentConfig& c) {
  if (c.sigma_mode != SigmaMode::kIdentity) {
    config_error("sigma_mode", "the C-hat experiment runs with identity covariance only");
  }
  return run_all(c, [&c](const Cell& cell, int rep, RandomStream& rng,
                         ReplicateResult* out) {
    Vector h = Vector::Zero(c.p);
    h(0) = std::sqrt(cell.tau);
    const linalg::SpdMatrix eye(Matrix::Identity(c.p, c.p));
    Truth truth{model::MixtureParams::centered(cell.alpha1, h, eye), h, h};
    const auto data = model::sample(truth.params, cell.n, rng);
    run_methods(c, cell, rep, truth, data, rng, orth_unit(h), out);
  });
}

std::vector<ReplicateResult> msi_replicates(const ExperimentConfig& c) {
  return run_all(c, [&c](const Cell& cell, int rep, RandomStream& rng,
                         ReplicateResult* out) {
    Matrix sigma = Matrix::Identity(c.p, c.p);
    if (c.sigma_mode == SigmaMode::kRandomAAt) {
      Matrix a(c.p, c.p);
      for (Eigen::Index i = 0; i < c.p; ++i)
        for (Eigen::Index j = 0; j < c.p; ++j) a(i, j) = rng.normal();
      sigma = a * a.transpose();
      sigma = 0.5 * (sigma + sigma.transpose()).eval();
    }
    const Vector dir = rng.unit_vector(c.p);
    try {
      const linalg::SpdMatrix s(sigma);
      const Vector h = dir * std::sqrt(cell.tau / dir.dot(sigma.llt().solve(dir)));
      Truth truth{model::MixtureParams::centered(cell.alpha1, h, s), h,
                  sigma.llt().solve(h)};
      const auto data = model::sample(truth.params, cell.n, rng);
      run_methods(c, cell, rep, truth, data, rng, orth_unit(h), out);
    } catch (const Error&) {
      const auto block = failed_block(c, cell, rep);
      std::copy(block.begin(), block.end(), out);
    }
  });
}

namespace {

using Key = std::tuple<std::string, double, double, Eigen::Index>;

Key key_of(const ReplicateResult& r) {
  return {std::string(estimators::method_name(r.method)), r.alpha1, r.tau, r.n};
}

}  // namespace

std::vector<ChatRow> summarize_chat(const ExperimentConfig& c,
                                    const std::vector<ReplicateResult>& results) {
  std::map<Key, std::vector<const ReplicateResult*>> groups;
  for (const auto& r : results) groups[key_of(r)].push_back(&r);
  std::vector<ChatRow> rows;
  for (const auto& [key, members] : groups) {
    const auto& first = *members.front();
    ChatRow row{first.method, first.alpha1, first.tau, first.n, 0, 0,
                std::numeric_limits<double>::quiet_NaN(),
                asymptotics::c_constant(first.method, first.alpha1, first.tau, c.p), true};
    double sum = 0.0;
    for (const auto* r : members) {
      if (r->failed) {
        ++row.reps_failed;
      } else {
        ++row.reps_used;
        sum += r->t_projection;
      }
    }
    if (row.reps_used >= 2) {
      const double mean = sum / row.reps_used;
      double ss = 0.0;
      for (const auto* r : members) {
        if (!r->failed) ss += (r->t_projection - mean) * (r->t_projection - mean);
      }
      row.c_hat = static_cast<double>(row.n) * ss / (row.reps_used - 1);
    }
    row.low_precision = row.reps_used < kLowPrecisionReps;
    rows.push_back(row);
  }
  return rows;
}

std::vector<MsiRow> summarize_msi(const ExperimentConfig& c,
                                  const std::vector<ReplicateResult>& results) {
  std::map<Key, std::vector<const ReplicateResult*>> groups;
  for (const auto& r : results) groups[key_of(r)].push_back(&r);
  std::vector<MsiRow> rows;
  for (const auto& [key, members] : groups) {
    const auto& first = *members.front();
    MsiRow row{first.method, first.alpha1, first.tau, first.n, c.p, 0, 0,
               std::numeric_limits<double>::quiet_NaN()};
    double sum = 0.0;
    for (const auto* r : members) {
      if (r->failed) {
        ++row.reps_failed;
      } else {
        ++row.reps_used;
        sum += r->msi;
      }
    }
    if (row.reps_used > 0) row.mean_msi = sum / row.reps_used;
    rows.push_back(row);
  }
  return rows;
}

std::vector<ChatRow> chat_experiment(const ExperimentConfig& config) {
  return summarize_chat(config, chat_replicates(config));
}

std::vector<MsiRow> msi_experiment(const ExperimentConfig& config) {
  return summarize_msi(config, msi_replicates(config));
}

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "NA";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

void write_chat_csv(std::ostream& os, const std::vector<ChatRow>& rows) {
  os << "method,alpha1,tau,n,reps_used,reps_failed,c_hat,c_theory\n";
  for (const auto& r : rows) {
    os << estimators::method_name(r.method) << ',' << num(r.alpha1) << ',' << num(r.tau)
       << ',' << r.n << ',' << r.reps_used << ',' << r.reps_failed << ','
       << num(r.c_hat) << ','
       << (r.c_theory ? num(*r.c_theory) : std::string("NA")) << '\n';
  }
}

void write_msi_csv(std::ostream& os, const std::vector<MsiRow>& rows) {
  os << "method,alpha1,tau,n,p,reps_used,reps_failed,mean_msi\n";
  for (const auto& r : rows) {
    os << estimators::method_name(r.method) << ',' << num(r.alpha1) << ',' << num(r.tau)
       << ',' << r.n << ',' << r.p << ',' << r.reps_used << ',' << r.reps_failed << ','
       << num(r.mean_msi) << '\n';
  }
}

}  // namespace skewlda::montecarlo
