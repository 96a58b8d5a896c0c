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

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "scramblon/errors.hpp"
#include "scramblon/seft.hpp"

namespace scramblon::seft {

Distance distribution_distance(const ContinuumDistribution& a, const ContinuumDistribution& b) {
    std::vector<double> grid(a.grid().begin(), a.grid().end());
    const bool same = std::equal(a.grid().begin(), a.grid().end(), b.grid().begin(), b.grid().end());
    std::vector<double> fa, fb;
    if (same) {
        fa.assign(a.density().begin(), a.density().end());
        fb.assign(b.density().begin(), b.density().end());
    } else {
        grid.insert(grid.end(), b.grid().begin(), b.grid().end());
        std::sort(grid.begin(), grid.end());
        grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
        fa.reserve(grid.size());
        fb.reserve(grid.size());
        for (double s : grid) {
            fa.push_back(a.at(s));
            fb.push_back(b.at(s));
        }
    }
    std::vector<double> diff(grid.size());
    Distance d;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        diff[k] = std::abs(fa[k] - fb[k]);
        d.sup = std::max(d.sup, diff[k]);
    }
    d.l1 = trapezoid(grid, diff);
    const auto ca = cumulative_trapezoid(grid, fa);
    const auto cb = cumulative_trapezoid(grid, fb);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        d.ks = std::max(d.ks, std::abs(ca[k] - cb[k]));
    }
    return d;
}

double band_containment(std::span<const double> value, std::span<const double> lo, std::span<const double> hi,
                        double tol) {
    if (value.size() != lo.size() || value.size() != hi.size() || value.empty()) {
        throw ConfigError("band_containment: mismatched or empty inputs");
    }
    std::size_t inside = 0;
    for (std::size_t k = 0; k < value.size(); ++k) {
        inside += value[k] >= lo[k] - tol && value[k] <= hi[k] + tol;
    }
    return static_cast<double>(inside) / static_cast<double>(value.size());
}

}  // namespace scramblon::seft
