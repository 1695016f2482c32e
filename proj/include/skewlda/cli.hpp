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

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "skewlda/error.hpp"
#include "skewlda/model.hpp"
#include "skewlda/montecarlo.hpp"

namespace skewlda::cli {

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Reads a headered, comma separated numeric table. A column named "label"
/// (values -1 or 1) becomes the labels; all other columns are features.
/// Throws kParse with the offending line number.
model::DataSet read_csv(std::istream& in);
model::DataSet read_csv_file(const std::string& path);

/// Writes features x1..xp and, when present, the label column.
void write_csv(std::ostream& out, const model::DataSet& data);

/// Parses an experiment config. Unknown or ill-typed fields throw kConfig
/// naming the field.
montecarlo::ExperimentConfig config_from_json(const nlohmann::json& j,
                                              montecarlo::SigmaMode default_sigma);

int exit_code_for(ErrorKind kind) noexcept;

/// Entry point shared by the skewlda executable and the tests. Reports
/// failures as a single JSON line on `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace skewlda::cli
