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

#include "scramblon/core.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "scramblon/errors.hpp"

namespace scramblon {

namespace {

void require_same_size(std::span<const double> x, std::span<const double> f, const char* what) {
    if (x.size() != f.size()) {
        throw ConfigError(fmt::format("{}: grid has {} points but values have {}", what, x.size(), f.size()));
    }
}

void require_ascending(std::span<const double> x, const char* what) {
    for (std::size_t k = 1; k < x.size(); ++k) {
        if (!(x[k] > x[k - 1])) {
            throw ConfigError(fmt::format("{}: grid is not strictly ascending at index {}", what, k));
        }
    }
}

}  // namespace

std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
    if (n < 2 || !(hi > lo)) {
        throw ConfigError(fmt::format("uniform_grid: need n >= 2 and hi > lo (n={}, lo={}, hi={})", n, lo, hi));
    }
    std::vector<double> x(n);
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t k = 0; k < n; ++k) {
        x[k] = lo + step * static_cast<double>(k);
    }
    x.back() = hi;
    return x;
}

std::vector<double> graded_grid(double hi, std::size_t n, double power) {
    if (n < 2 || !(hi > 0.0) || !(power >= 1.0)) {
        throw ConfigError(fmt::format("graded_grid: need n >= 2, hi > 0, power >= 1 (n={}, hi={}, power={})", n,
                                      hi, power));
    }
    std::vector<double> x(n);
    for (std::size_t k = 0; k < n; ++k) {
        x[k] = hi * std::pow(static_cast<double>(k) / static_cast<double>(n - 1), power);
    }
    x.back() = hi;
    return x;
}

double trapezoid(std::span<const double> x, std::span<const double> f) {
    require_same_size(x, f, "trapezoid");
    double total = 0.0;
    for (std::size_t k = 1; k < x.size(); ++k) {
        total += 0.5 * (x[k] - x[k - 1]) * (f[k] + f[k - 1]);
    }
    return total;
}

std::vector<double> cumulative_trapezoid(std::span<const double> x, std::span<const double> f) {
    require_same_size(x, f, "cumulative_trapezoid");
    std::vector<double> out(x.size(), 0.0);
    for (std::size_t k = 1; k < x.size(); ++k) {
        out[k] = out[k - 1] + 0.5 * (x[k] - x[k - 1]) * (f[k] + f[k - 1]);
    }
    return out;
}

std::vector<double> trapezoid_weights(std::span<const double> x) {
    std::vector<double> w(x.size(), 0.0);
    for (std::size_t k = 1; k < x.size(); ++k) {
        const double half = 0.5 * (x[k] - x[k - 1]);
        w[k - 1] += half;
        w[k] += half;
    }
    return w;
}

double interpolate_linear(std::span<const double> x, std::span<const double> f, double at) {
    require_same_size(x, f, "interpolate_linear");
    if (x.empty()) {
        throw ConfigError("interpolate_linear: empty grid");
    }
    if (at <= x.front()) return f.front();
    if (at >= x.back()) return f.back();
    const auto it = std::upper_bound(x.begin(), x.end(), at);
    const auto hi = static_cast<std::size_t>(it - x.begin());
    const std::size_t lo = hi - 1;
    const double frac = (at - x[lo]) / (x[hi] - x[lo]);
    return f[lo] + frac * (f[hi] - f[lo]);
}

std::vector<double> resample_linear(std::span<const double> x, std::span<const double> f,
                                    std::span<const double> new_x) {
    std::vector<double> out(new_x.size());
    for (std::size_t k = 0; k < new_x.size(); ++k) {
        out[k] = interpolate_linear(x, f, new_x[k]);
    }
    return out;
}

// ---------------------------------------------------------------------------

SizeDistribution::SizeDistribution(std::vector<double> p, double time) : p_(std::move(p)), time_(time) {
    if (p_.empty()) {
        throw ConfigError("SizeDistribution: N must be positive");
    }
    double total = 0.0;
    for (std::size_t k = 0; k < p_.size(); ++k) {
        double& v = p_[k];
        if (!std::isfinite(v) || v < -kClampTolerance) {
            throw ConfigError(fmt::format("SizeDistribution: P({}) = {} is negative beyond tolerance", k + 1, v));
        }
        if (v < 0.0) v = 0.0;
        total += v;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw ConfigError(fmt::format("SizeDistribution: total probability {:.17g} differs from 1", total));
    }
}

SizeDistribution SizeDistribution::point_mass(int N, int n, double time) {
    if (N < 1 || n < 1 || n > N) {
        throw ConfigError(fmt::format("point_mass: need 1 <= n <= N (n={}, N={})", n, N));
    }
    std::vector<double> p(static_cast<std::size_t>(N), 0.0);
    p[static_cast<std::size_t>(n - 1)] = 1.0;
    return SizeDistribution(std::move(p), time);
}

ContinuumDistribution::ContinuumDistribution(std::vector<double> s_grid, std::vector<double> density, double time,
                                             std::vector<std::string> warnings)
    : s_(std::move(s_grid)), rho_(std::move(density)), time_(time), warnings_(std::move(warnings)) {
    require_same_size(s_, rho_, "ContinuumDistribution");
    if (s_.size() < 2) {
        throw ConfigError("ContinuumDistribution: grid needs at least 2 points");
    }
    require_ascending(s_, "ContinuumDistribution");
    if (s_.front() < 0.0 || s_.back() > 1.0 + 1e-12) {
        throw ConfigError("ContinuumDistribution: grid must lie inside [0, 1]");
    }
    for (double v : rho_) {
        if (!std::isfinite(v) || v < 0.0) {
            throw ConfigError(fmt::format("ContinuumDistribution: invalid density sample {}", v));
        }
    }
    const double mass = trapezoid(s_, rho_);
    if (std::abs(mass - 1.0) > 1e-6) {
        throw ConfigError(fmt::format("ContinuumDistribution: trapezoid mass {:.17g} differs from 1", mass));
    }
}

ContinuumDistribution ContinuumDistribution::normalized(std::vector<double> s_grid, std::vector<double> density,
                                                        double time, std::vector<std::string> warnings) {
    require_same_size(s_grid, density, "ContinuumDistribution::normalized");
    double peak = 0.0;
    for (double v : density) {
        if (!std::isfinite(v)) {
            throw ConfigError("ContinuumDistribution::normalized: non-finite density sample");
        }
        peak = std::max(peak, v);
    }
    for (double& v : density) {
        if (v < 0.0) {
            if (v < -kClampTolerance * std::max(peak, 1.0)) {
                throw ConfigError(fmt::format("ContinuumDistribution::normalized: negative density {}", v));
            }
            v = 0.0;
        }
    }
    const double mass = trapezoid(s_grid, density);
    if (!(mass > 0.0)) {
        throw ConfigError("ContinuumDistribution::normalized: density has zero mass on the grid");
    }
    for (double& v : density) v /= mass;
    ContinuumDistribution out(std::move(s_grid), std::move(density), time, std::move(warnings));
    out.raw_mass_ = mass;
    return out;
}

ContinuumDistribution ContinuumDistribution::point_mass(std::vector<double> s_grid, double s, double time) {
    if (s_grid.size() < 2) {
        throw ConfigError("ContinuumDistribution::point_mass: grid needs at least 2 points");
    }
    const auto w = trapezoid_weights(s_grid);
    std::size_t best = 0;
    for (std::size_t k = 1; k < s_grid.size(); ++k) {
        if (std::abs(s_grid[k] - s) < std::abs(s_grid[best] - s)) best = k;
    }
    std::vector<double> rho(s_grid.size(), 0.0);
    rho[best] = 1.0 / w[best];
    return ContinuumDistribution(std::move(s_grid), std::move(rho), time);
}

double ContinuumDistribution::at(double s) const {
    if (s < s_.front() || s > s_.back()) return 0.0;
    return interpolate_linear(s_, rho_, s);
}

void ScramblonParams::validate() const {
    if (!(kappa > 0.0) || !(C > 0.0)) {
        throw ConfigError(fmt::format("ScramblonParams: need kappa > 0 and C > 0 (kappa={}, C={})", kappa, C));
    }
    if (s_sc != kScrambledSize) {
        throw ConfigError("ScramblonParams: s_sc is fixed to 3/4 for spin-1/2 models");
    }
}

double ScramblonParams::lambda(double t) const { return std::exp(kappa * t) / C; }

SourceFunction::SourceFunction(std::vector<double> y_grid, std::vector<double> h, double weight)
    : y_(std::move(y_grid)), h_(std::move(h)), weight_(weight) {
    require_same_size(y_, h_, "SourceFunction");
    if (y_.size() < 2) {
        throw ConfigError("SourceFunction: grid needs at least 2 points");
    }
    require_ascending(y_, "SourceFunction");
    if (y_.front() < 0.0) {
        throw ConfigError("SourceFunction: grid must be non-negative");
    }
    for (double v : h_) {
        if (!std::isfinite(v) || v < 0.0) {
            throw ConfigError(fmt::format("SourceFunction: invalid sample {}", v));
        }
    }
    const double mass = trapezoid(y_, h_);
    if (std::abs(mass - 1.0) > 1e-6) {
        throw ConfigError(fmt::format("SourceFunction: mass {:.17g} differs from 1", mass));
    }
}

SourceFunction::SourceFunction(std::vector<double> y_grid, std::vector<double> h)
    : SourceFunction(std::move(y_grid), std::move(h), 1.0) {}

SourceFunction SourceFunction::normalized(std::vector<double> y_grid, std::vector<double> h) {
    require_same_size(y_grid, h, "SourceFunction::normalized");
    const double mass = trapezoid(y_grid, h);
    if (!(mass > 0.0) || !std::isfinite(mass)) {
        throw ConfigError("SourceFunction::normalized: zero or non-finite mass");
    }
    for (double& v : h) v /= mass;
    return SourceFunction(std::move(y_grid), std::move(h), mass);
}

SourceFunction SourceFunction::sample(std::vector<double> y_grid, const std::function<double(double)>& fn) {
    std::vector<double> h(y_grid.size());
    std::transform(y_grid.begin(), y_grid.end(), h.begin(), fn);
    return normalized(std::move(y_grid), std::move(h));
}

// ---------------------------------------------------------------------------

ContinuumDistribution to_continuum(const SizeDistribution& d, std::size_t grid_size) {
    if (grid_size < 2) {
        throw ConfigError("to_continuum: grid_size must be at least 2");
    }
    const int N = d.N();
    auto s = uniform_grid(0.0, 1.0, grid_size);
    std::vector<double> rho(grid_size);
    for (std::size_t k = 0; k < grid_size; ++k) {
        const auto n = std::clamp(static_cast<int>(std::lround(s[k] * N)), 1, N);
        rho[k] = N * d(n);
    }

    std::vector<std::string> warnings;
    const auto nonzero = std::count_if(rho.begin(), rho.end(), [](double v) { return v > 0.0; });
    const double sampled_mass = trapezoid(s, rho);
    if (nonzero < 3 || std::abs(sampled_mass - 1.0) > 0.05) {
        warnings.push_back(fmt::format(
            "to_continuum: grid of {} points under-resolves the distribution (N={}, sampled mass {:.6g})", grid_size,
            N, sampled_mass));
    }
    if (!(sampled_mass > 0.0)) {
        // Every sampled size carries zero weight: keep the mass at the mean.
        auto out = ContinuumDistribution::point_mass(std::move(s), mean_size(d), d.time());
        return ContinuumDistribution(std::vector<double>(out.grid().begin(), out.grid().end()),
                                     std::vector<double>(out.density().begin(), out.density().end()), d.time(),
                                     std::move(warnings));
    }
    return ContinuumDistribution::normalized(std::move(s), std::move(rho), d.time(), std::move(warnings));
}

double mean_size(const SizeDistribution& d) {
    const auto p = d.probabilities();
    const double N = d.N();
    double total = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        total += static_cast<double>(k + 1) / N * p[k];
    }
    return total;
}

double mean_size(const ContinuumDistribution& d) {
    const auto s = d.grid();
    const auto rho = d.density();
    std::vector<double> f(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) f[k] = s[k] * rho[k];
    return trapezoid(s, f);
}

double generating_function(const SizeDistribution& d, double nu) {
    const auto p = d.probabilities();
    const double N = d.N();
    double total = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        total += p[k] * std::exp(-nu * static_cast<double>(k + 1) / N);
    }
    return total;
}

double generating_function(const ContinuumDistribution& d, double nu) {
    const auto s = d.grid();
    const auto rho = d.density();
    double total = 0.0;
    double prev = rho[0] * std::exp(-nu * s[0]);
    for (std::size_t k = 1; k < s.size(); ++k) {
        const double cur = rho[k] * std::exp(-nu * s[k]);
        total += 0.5 * (s[k] - s[k - 1]) * (cur + prev);
        prev = cur;
    }
    return total;
}

LaplaceResult laplace_of_source(const SourceFunction& h, double x) {
    if (!(x >= 0.0)) {
        throw ConfigError(fmt::format("laplace_of_source: x must be non-negative (x={})", x));
    }
    const auto y = h.grid();
    const auto v = h.values();
    double total = 0.0;
    double prev = v[0] * std::exp(-x * y[0]);
    for (std::size_t k = 1; k < y.size(); ++k) {
        const double cur = v[k] * std::exp(-x * y[k]);
        total += 0.5 * (y[k] - y[k - 1]) * (cur + prev);
        prev = cur;
    }
    if (total < DBL_MIN) {
        return {0.0, true};
    }
    return {total, false};
}

double LaplaceTransform::operator()(double x) const { return laplace_of_source(h_, x).value; }

double LaplaceTransform::derivative(double x) const {
    const auto y = h_.grid();
    const auto v = h_.values();
    double total = 0.0;
    double prev = y[0] * v[0] * std::exp(-x * y[0]);
    for (std::size_t k = 1; k < y.size(); ++k) {
        const double cur = y[k] * v[k] * std::exp(-x * y[k]);
        total += 0.5 * (y[k] - y[k - 1]) * (cur + prev);
        prev = cur;
    }
    return -total;
}

}  // namespace scramblon
