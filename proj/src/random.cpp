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

#include "skewlda/random.hpp"

namespace skewlda {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 seeded_engine(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t x = splitmix64(a);
  const std::uint64_t y = splitmix64(b ^ 0xd1b54a32d192ed03ULL);
  std::seed_seq seq{static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(x >> 32),
                    static_cast<std::uint32_t>(y), static_cast<std::uint32_t>(y >> 32),
                    static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed)
    : engine_(seeded_engine(seed, ~std::uint64_t{0})) {}

RandomStream::RandomStream(std::uint64_t master_seed, std::uint64_t index)
    : engine_(seeded_engine(master_seed, index)) {}

Vector RandomStream::normal_vector(Eigen::Index p) {
  Vector v(p);
  for (Eigen::Index i = 0; i < p; ++i) v(i) = normal();
  return v;
}

Vector RandomStream::unit_vector(Eigen::Index p) {
  for (;;) {
    Vector v = normal_vector(p);
    const double norm = v.norm();
    if (norm > 1e-8) return v / norm;
  }
}

}  // namespace skewlda
