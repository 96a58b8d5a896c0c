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

#include "run_output.hpp"

#include <fstream>

#include <fmt/format.h>

#include "scramblon/errors.hpp"

namespace scramblon::cli {

std::string kt_label(double kt) {
    return fmt::format("{:g}", kt);
}

std::filesystem::path sidecar_path(const std::filesystem::path& data_file) {
    auto p = data_file;
    p.replace_extension(".json");
    return p;
}

void write_json(const std::filesystem::path& path, const json& value) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) {
            throw IoError(fmt::format("cannot create directory {}: {}", path.parent_path().string(), ec.message()));
        }
    }
    std::ofstream out(path);
    if (!out) {
        throw IoError(fmt::format("cannot open {} for writing", path.string()));
    }
    out << value.dump(2) << '\n';
    if (!out) {
        throw IoError(fmt::format("write failed: {}", path.string()));
    }
}

void write_sidecar(const std::filesystem::path& data_file, json meta) {
    meta["file"] = data_file.filename().string();
    write_json(sidecar_path(data_file), meta);
}

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError(fmt::format("cannot open {}", path.string()));
    }
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw IoError(fmt::format("bad JSON in {}: {}", path.string(), e.what()));
    }
}

double snapshot_time(const std::filesystem::path& data_file) {
    const auto side = sidecar_path(data_file);
    if (!std::filesystem::exists(side)) {
        throw ConfigError(fmt::format("no sidecar {} for {}; pass --times explicitly", side.string(),
                                      data_file.string()));
    }
    const json meta = read_json(side);
    if (!meta.contains("t") || !meta["t"].is_number()) {
        throw ConfigError(fmt::format("sidecar {} has no numeric 't'", side.string()));
    }
    return meta["t"].get<double>();
}

}  // namespace scramblon::cli
