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
#include <random>

#include "skewlda/linalg.hpp"

namespace skewlda {

/// A seeded pseudo-random stream. Copyable; a copy continues the same
/// sequence independently of the original.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed = 0);
  RandomStream(std::uint64_t master_seed, std::uint64_t index);

  double uniform() { return uniform_(engine_); }
  double normal() { return normal_(engine_); }
  Vector normal_vector(Eigen::Index p);
  /// Uniform on the unit sphere in R^p.
  Vector unit_vector(Eigen::Index p);
  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace skewlda
