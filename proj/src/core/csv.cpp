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

#include "scramblon/csv.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "scramblon/errors.hpp"

namespace scramblon::csv {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path);
    if (!out) {
        throw IoError(fmt::format("cannot open {} for writing", path.string()));
    }
    return out;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        cells.push_back(cell);
    }
    return cells;
}

}  // namespace

void write_columns(const std::filesystem::path& path, const std::vector<std::string>& header,
                   const std::vector<std::vector<double>>& columns, const std::vector<bool>& integer_columns) {
    if (header.size() != columns.size()) {
        throw ConfigError("write_columns: header and column count differ");
    }
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (const auto& c : columns) {
        if (c.size() != rows) throw ConfigError("write_columns: ragged columns");
    }
    auto out = open_for_write(path);
    for (std::size_t j = 0; j < header.size(); ++j) {
        out << (j ? "," : "") << header[j];
    }
    out << '\n';
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t j = 0; j < columns.size(); ++j) {
            if (j) out << ',';
            const bool as_int = j < integer_columns.size() && integer_columns[j];
            if (as_int) {
                out << fmt::format("{}", static_cast<long long>(std::llround(columns[j][r])));
            } else {
                out << fmt::format("{:.17g}", columns[j][r]);
            }
        }
        out << '\n';
    }
    if (!out) {
        throw IoError(fmt::format("write to {} failed", path.string()));
    }
}

const std::vector<double>& Table::column(const std::string& name) const {
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (header[j] == name) return columns[j];
    }
    throw IoError(fmt::format("CSV has no column '{}'", name));
}

Table read_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError(fmt::format("cannot open {}", path.string()));
    }
    Table t;
    std::string line;
    if (!std::getline(in, line)) {
        throw IoError(fmt::format("{} is empty", path.string()));
    }
    t.header = split(line);
    t.columns.resize(t.header.size());
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto cells = split(line);
        if (cells.size() != t.header.size()) {
            throw IoError(fmt::format("{}:{}: expected {} fields, got {}", path.string(), lineno, t.header.size(),
                                      cells.size()));
        }
        for (std::size_t j = 0; j < cells.size(); ++j) {
            try {
                std::size_t used = 0;
                t.columns[j].push_back(std::stod(cells[j], &used));
            } catch (const std::exception&) {
                throw IoError(fmt::format("{}:{}: cannot parse '{}'", path.string(), lineno, cells[j]));
            }
        }
    }
    return t;
}

void write_size(const std::filesystem::path& path, const SizeDistribution& d) {
    std::vector<double> n(static_cast<std::size_t>(d.N()));
    for (std::size_t k = 0; k < n.size(); ++k) n[k] = static_cast<double>(k + 1);
    const auto p = d.probabilities();
    write_columns(path, {"n", "p"}, {n, std::vector<double>(p.begin(), p.end())}, {true, false});
}

SizeDistribution read_size(const std::filesystem::path& path, double time) {
    const auto t = read_table(path);
    const auto& n = t.column("n");
    const auto& p = t.column("p");
    for (std::size_t k = 0; k < n.size(); ++k) {
        if (std::llround(n[k]) != static_cast<long long>(k + 1)) {
            throw IoError(fmt::format("{}: sizes must run 1..N in order", path.string()));
        }
    }
    return SizeDistribution(p, time);
}

void write_continuum(const std::filesystem::path& path, const ContinuumDistribution& d) {
    write_columns(path, {"s", "density"},
                  {std::vector<double>(d.grid().begin(), d.grid().end()),
                   std::vector<double>(d.density().begin(), d.density().end())});
}

ContinuumDistribution read_continuum(const std::filesystem::path& path, double time) {
    const auto t = read_table(path);
    const auto& s = t.column("s");
    const auto& rho = t.column("density");
    // Files we wrote are already normalized; keep their values bit for bit.
    if (std::abs(trapezoid(s, rho) - 1.0) <= 1e-12) {
        return ContinuumDistribution(s, rho, time);
    }
    return ContinuumDistribution::normalized(s, rho, time);
}

}  // namespace scramblon::csv
