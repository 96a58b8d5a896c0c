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

namespace {

double average(std::span<const Transform> fs, double x) {
    double sum = 0.0;
    for (const auto& f : fs) {
        sum += f(x);
    }
    return sum / static_cast<double>(fs.size());
}

// Central difference, one-sided at the origin.
double average_derivative(std::span<const Transform> fs, double x) {
    const double h = 1e-6 * std::max(1.0, x);
    if (x >= h) {
        return (average(fs, x + h) - average(fs, x - h)) / (2.0 * h);
    }
    return (-3.0 * average(fs, x) + 4.0 * average(fs, x + h) - average(fs, x + 2.0 * h)) / (2.0 * h);
}

}  // namespace

ContinuumDistribution forward_size_distribution(const SourceFunction& h, std::span<const Transform> f_by_alpha,
                                                double lambda, std::vector<double> s_grid) {
    if (f_by_alpha.size() != 1 && f_by_alpha.size() != 3) {
        throw ConfigError(fmt::format("expected one averaged or three per-direction transforms, got {}",
                                      f_by_alpha.size()));
    }
    if (!(lambda >= 0.0)) {
        throw ConfigError(fmt::format("lambda must be non-negative (lambda={})", lambda));
    }
    const double s_sc = kScrambledSize;
    if (lambda == 0.0) {
        return ContinuumDistribution::point_mass(std::move(s_grid), 0.0, 0.0);
    }
    if (std::isinf(lambda)) {
        const double limit = average(f_by_alpha, std::numeric_limits<double>::max());
        return ContinuumDistribution::point_mass(std::move(s_grid), s_sc * (1.0 - limit), 0.0);
    }

    const auto y = h.grid();
    const auto hv = h.values();
    std::vector<double> s_of_y(y.size());
    for (std::size_t k = 0; k < y.size(); ++k) {
        s_of_y[k] = s_sc * (1.0 - average(f_by_alpha, lambda * y[k]));
        if (k > 0 && s_of_y[k] < s_of_y[k - 1] - 1e-12) {
            throw ConfigError(fmt::format(
                "transform is not monotone decreasing near x={:.6g}; a Laplace transform of h >= 0 must be",
                lambda * y[k]));
        }
    }

    // Grid resolution check: spread of s under h versus the s-grid spacing.
    std::vector<double> moment(y.size());
    for (std::size_t k = 0; k < y.size(); ++k) moment[k] = hv[k] * s_of_y[k];
    const double mean = trapezoid(y, moment);
    for (std::size_t k = 0; k < y.size(); ++k) moment[k] = hv[k] * (s_of_y[k] - mean) * (s_of_y[k] - mean);
    const double spread = std::sqrt(std::max(0.0, trapezoid(y, moment)));
    double spacing = 0.0;
    for (std::size_t k = 1; k < s_grid.size(); ++k) spacing = std::max(spacing, s_grid[k] - s_grid[k - 1]);
    if (spread < spacing) {
        auto out = ContinuumDistribution::point_mass(std::move(s_grid), mean, 0.0);
        return ContinuumDistribution(std::vector<double>(out.grid().begin(), out.grid().end()),
                                     std::vector<double>(out.density().begin(), out.density().end()), 0.0,
                                     {fmt::format("distribution narrower than the grid (spread {:.3g}); "
                                                  "rendered as a point mass",
                                                  spread)});
    }

    std::vector<std::string> warnings;
    std::vector<double> rho(s_grid.size(), 0.0);
    const double s_lo = s_of_y.front();
    const double s_hi = s_of_y.back();
    for (std::size_t i = 0; i < s_grid.size(); ++i) {
        const double s = s_grid[i];
        if (s < s_lo || s > s_hi) {
            continue;
        }
        // Bracket in the tabulated s(y), then bisect on the transform itself.
        const auto it = std::lower_bound(s_of_y.begin(), s_of_y.end(), s);
        std::size_t k = static_cast<std::size_t>(it - s_of_y.begin());
        double a = y[k == 0 ? 0 : k - 1];
        double b = y[k];
        for (int iter = 0; iter < 100 && b - a > 1e-15 * std::max(1.0, b); ++iter) {
            const double mid = 0.5 * (a + b);
            if (s_sc * (1.0 - average(f_by_alpha, lambda * mid)) < s) {
                a = mid;
            } else {
                b = mid;
            }
        }
        const double yy = 0.5 * (a + b);
        const double ds_dy = -s_sc * lambda * average_derivative(f_by_alpha, lambda * yy);
        if (!(ds_dy > 0.0)) {
            if (warnings.empty()) {
                warnings.push_back(fmt::format("flat transform near s={:.6g}; density dropped there", s));
            }
            continue;
        }
        rho[i] = interpolate_linear(y, hv, yy) / ds_dy;
    }
    return ContinuumDistribution::normalized(std::move(s_grid), std::move(rho), 0.0, std::move(warnings));
}

ContinuumDistribution forward_size_distribution(const SourceFunction& h, std::span<const Transform> f_by_alpha,
                                                double lambda, std::size_t grid_size) {
    return forward_size_distribution(h, f_by_alpha, lambda, uniform_grid(0.0, 1.0, grid_size));
}

}  // namespace scramblon::seft
