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

// CSV serialization. Size distributions use the header `n,p`, continuum
// densities `s,density`. Floats are written with 17 significant digits so a
// round trip is exact.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "scramblon/core.hpp"

namespace scramblon::csv {

void write_size(const std::filesystem::path& path, const SizeDistribution& d);
SizeDistribution read_size(const std::filesystem::path& path, double time);

void write_continuum(const std::filesystem::path& path, const ContinuumDistribution& d);
ContinuumDistribution read_continuum(const std::filesystem::path& path, double time);

/// Writes equally long columns under the given header names. Integer-valued
/// columns are still emitted through the float formatter unless listed in
/// `integer_columns`.
void write_columns(const std::filesystem::path& path, const std::vector<std::string>& header,
                   const std::vector<std::vector<double>>& columns, const std::vector<bool>& integer_columns = {});

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;

    const std::vector<double>& column(const std::string& name) const;
};

Table read_table(const std::filesystem::path& path);

}  // namespace scramblon::csv
