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
#include <limits>

#include <fmt/format.h>

#include "scramblon/errors.hpp"
#include "scramblon/seft.hpp"

namespace scramblon::seft {

KappaFit fit_kappa(std::span<const std::pair<double, double>> points) {
    if (points.size() < 3) {
        throw ConfigError(fmt::format("kappa fit needs at least 3 early times (got {})", points.size()));
    }
    for (const auto& [t0, sbar] : points) {
        if (!(sbar > 0.0) || !std::isfinite(t0)) {
            throw ConfigError(fmt::format("bad fit point (t0={}, sbar0={})", t0, sbar));
        }
        if (sbar / kScrambledSize > kEarlyRegimeBound) {
            throw ConfigError(fmt::format("point t0={} has sbar0/s_sc={:.4g} > {}; outside the early regime", t0,
                                          sbar / kScrambledSize, kEarlyRegimeBound));
        }
    }
    const double n = static_cast<double>(points.size());
    double mx = 0.0, my = 0.0;
    for (const auto& [t0, sbar] : points) {
        mx += t0;
        my += std::log(sbar);
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [t0, sbar] : points) {
        const double dx = t0 - mx;
        const double dy = std::log(sbar) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    const auto [tmin, tmax] = std::minmax_element(points.begin(), points.end());
    if (!(tmax->first > tmin->first)) {
        throw ConfigError("kappa fit needs distinct times");
    }

    KappaFit fit;
    fit.t0_points.assign(points.begin(), points.end());
    fit.kappa = sxy / sxx;
    fit.log_intercept = my - fit.kappa * mx;
    const double ss_res = std::max(0.0, syy - fit.kappa * sxy);
    fit.kappa_stderr = std::sqrt(ss_res / (n - 2.0) / sxx);
    if (syy <= 1e-24 * std::max(1.0, my * my)) {
        fit.degenerate = true;
        fit.kappa = 0.0;
        fit.kappa_stderr = 0.0;
        fit.r_squared = std::numeric_limits<double>::quiet_NaN();
    } else {
        fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
    }
    return fit;
}

KappaFit fit_kappa(std::span<const SizeDistribution> early_data) {
    std::vector<std::pair<double, double>> points;
    points.reserve(early_data.size());
    for (const auto& d : early_data) {
        points.emplace_back(d.time(), mean_size(d));
    }
    return fit_kappa(points);
}

}  // namespace scramblon::seft
