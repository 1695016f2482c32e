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

#include "skewlda/error.hpp"

namespace skewlda {

std::string_view error_kind_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kSymmetryViolation: return "symmetry_violation";
    case ErrorKind::kNearSingularCovariance: return "near_singular_covariance";
    case ErrorKind::kDomain: return "domain";
    case ErrorKind::kInvalidWeight: return "invalid_weight";
    case ErrorKind::kInsufficientData: return "insufficient_data";
    case ErrorKind::kDegenerateSkewness: return "degenerate_skewness";
    case ErrorKind::kSingularMatrix: return "singular_matrix";
    case ErrorKind::kSupervisionRequired: return "supervision_required";
    case ErrorKind::kDivergence: return "divergence";
    case ErrorKind::kDimension: return "dimension";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kConfig: return "config";
    case ErrorKind::kUsage: return "usage";
  }
  return "unknown";
}

}  // namespace skewlda
