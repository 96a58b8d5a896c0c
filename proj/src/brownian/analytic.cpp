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

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "scramblon/brownian.hpp"
#include "scramblon/errors.hpp"

namespace scramblon::brownian {

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;

void require_positive_N(int N, const char* what) {
    if (N < 1) throw ConfigError(fmt::format("{}: N must be positive (N={})", what, N));
}

// E1(x) = -gamma - ln x - sum_{k>=1} (-x)^k / (k k!), for 0 < x <= 1.
double e1_series(double x) {
    double term = 1.0;
    double sum = 0.0;
    for (int k = 1; k < 200; ++k) {
        term *= -x / k;
        const double add = term / k;
        sum += add;
        if (std::abs(add) < 1e-18 * std::abs(sum)) break;
    }
    return -kEulerGamma - std::log(x) - sum;
}

// e^x E1(x) by the modified Lentz continued fraction, for x > 1.
double scaled_e1_fraction(double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        const double del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return h;
}

}  // namespace

double scaled_e1(double x) {
    if (!(x > 0.0)) {
        throw ConfigError(fmt::format("scaled_e1: x must be positive (x={})", x));
    }
    if (x <= 1.0) return std::exp(x) * e1_series(x);
    return scaled_e1_fraction(x);
}

double exp_integral(double x) {
    if (!(x < 0.0)) {
        throw ConfigError(fmt::format("exp_integral: domain error, x must be negative (x={})", x));
    }
    const double z = -x;
    if (z <= 1.0) return -e1_series(z);
    return -scaled_e1_fraction(z) * std::exp(-z);
}

double moment_formula(int N, double t) {
    require_positive_N(N, "moment_formula");
    if (!(t >= 0.0)) {
        throw ConfigError(fmt::format("moment_formula: t must be non-negative (t={})", t));
    }
    const double a = kScrambledSize * N * std::exp(-kLyapunov * t);
    if (a == 0.0) return 1.0;
    // e^a Ei(-a) = -e^a E1(a)
    return 1.0 - a * scaled_e1(a);
}

EarlyDistribution analytic_early(int N, double t0, std::vector<double> s_grid) {
    require_positive_N(N, "analytic_early");
    const double growth = std::exp(kLyapunov * t0);
    const double rate = N / growth;  // N e^{-kappa t0}
    std::vector<double> rho(s_grid.size());
    for (std::size_t k = 0; k < s_grid.size(); ++k) rho[k] = rate * std::exp(-s_grid[k] * rate);

    std::vector<std::string> warnings;
    const bool outside = growth > 0.2 * N;
    if (outside) {
        warnings.push_back(fmt::format("analytic_early: e^(kappa t0) = {:.6g} is not small compared to N = {}",
                                       growth, N));
    }
    return {ContinuumDistribution::normalized(std::move(s_grid), std::move(rho), t0, std::move(warnings)),
            growth / N, outside};
}

EarlyDistribution analytic_early(int N, double t0, std::size_t grid_size) {
    return analytic_early(N, t0, uniform_grid(0.0, 1.0, grid_size));
}

double analytic_late_density(int N, double t, double s) {
    const double gap = 1.0 - s / kScrambledSize;
    if (!(gap > 0.0)) return 0.0;
    const double kt = kLyapunov * t;
    const double log_rho = std::log(static_cast<double>(N)) - 2.0 * std::log(gap) - kt -
                           s * N * std::exp(-kt) / gap;
    return std::exp(log_rho);
}

ContinuumDistribution analytic_late(int N, double t, std::vector<double> s_grid) {
    require_positive_N(N, "analytic_late");
    std::vector<double> rho(s_grid.size());
    for (std::size_t k = 0; k < s_grid.size(); ++k) rho[k] = analytic_late_density(N, t, s_grid[k]);
    return ContinuumDistribution::normalized(std::move(s_grid), std::move(rho), t);
}

ContinuumDistribution analytic_late(int N, double t, std::size_t grid_size) {
    return analytic_late(N, t, uniform_grid(0.0, 1.0, grid_size));
}

}  // namespace scramblon::brownian
