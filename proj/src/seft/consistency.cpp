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
#include <numbers>

#include <fmt/format.h>

#include "scramblon/errors.hpp"
#include "scramblon/seft.hpp"

namespace scramblon::seft {

namespace {

// Early densities decay fast; past this fraction of the peak the tail is
// below double precision of any integral we take.
constexpr double kTrimFraction = 1e-18;
// Sampled mass of the pointwise image must be this close to 1 to be trusted.
constexpr double kResolvedMass = 0.05;

struct Samples {
    std::vector<double> s;
    std::vector<double> rho;
};

Samples trimmed(const ContinuumDistribution& d, std::size_t resample_size) {
    const auto s = d.grid();
    const auto rho = d.density();
    double peak = 0.0;
    for (double v : rho) peak = std::max(peak, v);
    std::size_t last = 0;
    for (std::size_t k = 0; k < rho.size(); ++k) {
        if (rho[k] > kTrimFraction * peak) last = k;
    }
    const std::size_t end = std::min(rho.size(), last + 2);
    Samples out;
    out.s.assign(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(end));
    out.rho.assign(rho.begin(), rho.begin() + static_cast<std::ptrdiff_t>(end));
    if (resample_size != 0) {
        auto grid = uniform_grid(out.s.front(), out.s.back(), resample_size);
        out.rho = resample_linear(out.s, out.rho, grid);
        out.s = std::move(grid);
    }
    return out;
}

void check_kappa(double kappa) {
    if (!(kappa > 0.0) || !std::isfinite(kappa)) {
        throw ConfigError(fmt::format("kappa must be positive and finite (kappa={})", kappa));
    }
}

double gaussian(double x, double sigma) {
    return std::exp(-0.5 * x * x / (sigma * sigma)) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

}  // namespace

const char* to_string(DeltaMethod m) {
    return m == DeltaMethod::gaussian_delta ? "gaussian_delta" : "change_of_variables";
}

DeltaMethod delta_method_from_string(const std::string& name) {
    if (name == "gaussian_delta") return DeltaMethod::gaussian_delta;
    if (name == "change_of_variables") return DeltaMethod::change_of_variables;
    throw ConfigError(fmt::format("unknown delta method '{}' (gaussian_delta | change_of_variables)", name));
}

void PredictionConfig::validate() const {
    if (output_grid_size < 2) {
        throw ConfigError("output_grid_size must be >= 2");
    }
    if (s1_grid_size == 1 || s2_grid_size == 1) {
        throw ConfigError("s1/s2 grid sizes must be 0 (native) or >= 2");
    }
    if (!(sigma > 0.0)) {
        throw ConfigError(fmt::format("sigma must be positive (sigma={})", sigma));
    }
    if (method == DeltaMethod::gaussian_delta) {
        const double spacing = 1.0 / static_cast<double>(output_grid_size - 1);
        if (sigma < 2.0 * spacing) {
            throw ConfigError(fmt::format("sigma={} must be at least twice the output grid spacing {:.4g}", sigma,
                                          spacing));
        }
    }
}

// ---------------------------------------------------------------------------

ConsistencyMap::ConsistencyMap(const ContinuumDistribution& early, double kappa, double elapsed,
                               std::size_t s2_grid_size) {
    check_kappa(kappa);
    if (!(elapsed >= 0.0)) {
        throw ConfigError(fmt::format("prediction time precedes the early data (t - t0 = {})", elapsed));
    }
    sbar0_ = mean_size(early);
    if (!(sbar0_ > 0.0)) {
        throw ConfigError("early data has zero mean size");
    }
    eta_ = std::exp(kappa * elapsed) / (kScrambledSize * sbar0_);
    Samples data = trimmed(early, s2_grid_size);
    const auto w = trapezoid_weights(data.s);
    weighted_.resize(data.s.size());
    double mass = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
        weighted_[k] = w[k] * data.rho[k];
        mass += weighted_[k];
    }
    // Unit mass so that g(0) = 0 exactly.
    for (double& v : weighted_) v /= mass;
    s2_ = std::move(data.s);
}

double ConsistencyMap::generating(double nu) const {
    double sum = 0.0;
    for (std::size_t k = 0; k < s2_.size(); ++k) {
        sum += weighted_[k] * std::exp(-nu * s2_[k]);
    }
    return sum;
}

double ConsistencyMap::g(double s1) const {
    return kScrambledSize * (1.0 - generating(eta_ * s1));
}

double ConsistencyMap::g_prime(double s1) const {
    double sum = 0.0;
    const double nu = eta_ * s1;
    for (std::size_t k = 0; k < s2_.size(); ++k) {
        sum += weighted_[k] * s2_[k] * std::exp(-nu * s2_[k]);
    }
    return kScrambledSize * eta_ * sum;
}

double ConsistencyMap::inverse(double s, double hi) const {
    // g is increasing and concave, so Newton from the left never overshoots;
    // the bracket guards against roundoff and flat tails.
    double lo = 0.0;
    double x = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
        const double r = g(x) - s;
        if (std::abs(r) <= 1e-15) {
            return x;
        }
        if (r < 0.0) {
            lo = x;
        } else {
            hi = x;
        }
        double next = x - r / g_prime(x);
        if (iter >= 60 || !(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        if (std::abs(next - x) <= 1e-16 * std::max(1e-300, x) || hi - lo <= 1e-16 * hi) {
            return next;
        }
        x = next;
    }
    return x;
}

// ---------------------------------------------------------------------------

ContinuumDistribution predict_late(const ContinuumDistribution& early, double kappa, double t,
                                   const PredictionConfig& cfg) {
    cfg.validate();
    check_kappa(kappa);
    const double t0 = early.time();
    if (t < t0) {
        throw ConfigError(fmt::format("prediction time t={} precedes t0={}", t, t0));
    }
    const ConsistencyMap map(early, kappa, t - t0, cfg.s2_grid_size);
    std::vector<std::string> warnings;
    const double ratio = map.early_mean() / kScrambledSize;
    if (ratio > kEarlyRegimeBound) {
        warnings.push_back(fmt::format("early data has sbar0/s_sc = {:.4g} > {}; outside the early-time expansion",
                                       ratio, kEarlyRegimeBound));
    }

    const Samples s1 = trimmed(early, cfg.s1_grid_size);
    const auto w1 = trapezoid_weights(s1.s);
    auto out_grid = uniform_grid(0.0, 1.0, cfg.output_grid_size);
    std::vector<double> rho(out_grid.size(), 0.0);

    if (cfg.method == DeltaMethod::change_of_variables) {
        const double s1_hi = s1.s.back();
        const double g_hi = map.g(s1_hi);
        std::vector<double> pre(out_grid.size(), s1_hi);  // g^{-1} at each node
        for (std::size_t i = 0; i < out_grid.size(); ++i) {
            const double s = out_grid[i];
            if (s > g_hi) {
                continue;
            }
            const double x = map.inverse(s, s1_hi);
            pre[i] = x;
            rho[i] = interpolate_linear(s1.s, s1.rho, x) / map.g_prime(x);
        }
        const double sampled = trapezoid(out_grid, rho);
        if (std::abs(sampled - 1.0) > kResolvedMass) {
            // The image is sharper than the output grid somewhere. Bin early
            // mass into output cells instead, which conserves it exactly.
            auto cdf = cumulative_trapezoid(s1.s, s1.rho);
            const double total = cdf.back();
            const double h = out_grid[1] - out_grid[0];
            std::vector<double> mass(out_grid.size() - 1);
            for (std::size_t i = 0; i + 1 < out_grid.size(); ++i) {
                mass[i] = (interpolate_linear(s1.s, cdf, pre[i + 1]) - interpolate_linear(s1.s, cdf, pre[i])) / total;
            }
            for (std::size_t i = 0; i < out_grid.size(); ++i) {
                const double left = i > 0 ? mass[i - 1] : 0.0;
                const double right = i < mass.size() ? mass[i] : 0.0;
                rho[i] = (left + right) / (2.0 * h);
            }
            warnings.push_back(fmt::format("pointwise image has mass {:.4g} on the output grid; binned by cell instead",
                                           sampled));
        }
    } else {
        std::vector<double> gk(s1.s.size());
        for (std::size_t k = 0; k < gk.size(); ++k) gk[k] = map.g(s1.s[k]);
        for (std::size_t i = 0; i < out_grid.size(); ++i) {
            double acc = 0.0;
            for (std::size_t k = 0; k < gk.size(); ++k) {
                const double d = out_grid[i] - gk[k];
                if (std::abs(d) < 40.0 * cfg.sigma) {
                    acc += w1[k] * s1.rho[k] * gaussian(d, cfg.sigma);
                }
            }
            rho[i] = acc;
        }
    }

    // A prediction narrower than the output grid cannot be sampled; render it
    // as a point mass at the mapped mean.
    const double mass = trapezoid(out_grid, rho);
    if (!(mass > 0.5)) {
        double mapped = 0.0, total = 0.0;
        for (std::size_t k = 0; k < s1.s.size(); ++k) {
            mapped += w1[k] * s1.rho[k] * map.g(s1.s[k]);
            total += w1[k] * s1.rho[k];
        }
        auto pm = ContinuumDistribution::point_mass(out_grid, mapped / total, t);
        warnings.push_back(fmt::format("prediction narrower than the output grid (sampled mass {:.3g}); "
                                       "rendered as a point mass",
                                       mass));
        return ContinuumDistribution(std::move(out_grid), std::vector<double>(pm.density().begin(), pm.density().end()),
                                     t, std::move(warnings));
    }
    return ContinuumDistribution::normalized(std::move(out_grid), std::move(rho), t, std::move(warnings));
}

double predict_mean(const ContinuumDistribution& early, double kappa, double t, std::size_t s2_grid_size) {
    check_kappa(kappa);
    if (t < early.time()) {
        throw ConfigError(fmt::format("prediction time t={} precedes t0={}", t, early.time()));
    }
    const ConsistencyMap map(early, kappa, t - early.time(), s2_grid_size);
    const Samples s1 = trimmed(early, s2_grid_size);
    const auto w1 = trapezoid_weights(s1.s);
    double total = 0.0, acc = 0.0;
    for (std::size_t k = 0; k < s1.s.size(); ++k) {
        total += w1[k] * s1.rho[k];
        acc += w1[k] * s1.rho[k] * map.generating(map.eta() * s1.s[k]);
    }
    return kScrambledSize * (1.0 - acc / total);
}

}  // namespace scramblon::seft
