// Copyright 2026 The Scramblon Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Output naming and JSON sidecars for the command-line driver.

#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

namespace scramblon::cli {

using json = nlohmann::json;

/// "4", "2.5", "0.3": the dimensionless time as it appears in file names.
std::string kt_label(double kt);

/// Sidecar path for a data file: same stem, extension .json.
std::filesystem::path sidecar_path(const std::filesystem::path& data_file);

/// Writes `meta` next to `data_file`, adding the file name. Everything but
/// wall_time_s is a pure function of the resolved configuration.
void write_sidecar(const std::filesystem::path& data_file, json meta);

void write_json(const std::filesystem::path& path, const json& value);
json read_json(const std::filesystem::path& path);

/// Time of a snapshot file, from its sidecar's "t" field.
double snapshot_time(const std::filesystem::path& data_file);

}  // namespace scramblon::cli
