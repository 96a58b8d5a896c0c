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
#include <complex>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "scramblon/errors.hpp"
#include "scramblon/mqc.hpp"

namespace scramblon::mqc {

namespace {

// A discretized mixture of Gaussians in xi: weights q_k, widths w_k.
//
// Node 0 usually sits at y = 0 where the width vanishes. Its Gaussian is a
// delta function at u = 0, but the continuum integrand there is only an
// integrable y^{-1/2} singularity. `cell0` is half the first cell times the
// source at node 1, so that the first cell can be integrated exactly with
// w linear in y.
struct Mixture {
    std::vector<double> q;
    std::vector<double> w;
    double cell0 = 0.0;
};

double mixture_F(const Mixture& mix, double xi) {
    double sum = 0.0;
    for (std::size_t k = 0; k < mix.q.size(); ++k) {
        sum += mix.q[k] * std::exp(-0.25 * xi * xi * mix.w[k]);
    }
    return sum;
}

// I(0) = (1/pi) int_0^inf F. The xi grid stops where the narrowest resolved
// width would no longer be sampled by the y quadrature (xi^2 w / 4 = 0.1);
// past that F falls as 1/xi^2 and the tail is F(Xi) Xi.
double mixture_I0_from_F(const Mixture& mix) {
    double w_min = 0.0, w_max = 0.0;
    for (std::size_t k = 0; k < mix.q.size(); ++k) {
        if (mix.q[k] > 0.0 && mix.w[k] >= kDeltaThreshold) {
            w_min = w_min == 0.0 ? mix.w[k] : std::min(w_min, mix.w[k]);
            w_max = std::max(w_max, mix.w[k]);
        }
    }
    if (w_max == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    const double xi_end = std::sqrt(0.4 / w_min);
    const double xi_start = std::min(0.01 / std::sqrt(w_max), 0.5 * xi_end);
    constexpr std::size_t kPoints = 4000;
    std::vector<double> xi{0.0};
    const double ratio = std::log(xi_end / xi_start) / static_cast<double>(kPoints - 1);
    for (std::size_t k = 0; k < kPoints; ++k) {
        xi.push_back(xi_start * std::exp(ratio * static_cast<double>(k)));
    }
    std::vector<double> F(xi.size());
    for (std::size_t k = 0; k < xi.size(); ++k) F[k] = mixture_F(mix, xi[k]);
    return (trapezoid(xi, F) + F.back() * xi.back()) / std::numbers::pi;
}

double mixture_I(const Mixture& mix, double u) {
    std::size_t deltas = 0;
    bool leading_delta = false;
    double sum = 0.0;
    for (std::size_t k = 0; k < mix.q.size(); ++k) {
        if (mix.q[k] == 0.0) continue;
        const double w = mix.w[k];
        if (w < kDeltaThreshold) {
            ++deltas;
            leading_delta = leading_delta || k == 0;
            continue;
        }
        sum += mix.q[k] * std::exp(-u * u / w) / std::sqrt(std::numbers::pi * w);
    }
    if (u != 0.0 || deltas == 0) {
        return sum;
    }
    if (deltas == 1 && leading_delta && mix.q.size() > 1 && mix.w[1] >= kDeltaThreshold) {
        // int_0^{y1} h(y) / sqrt(pi w1 y / y1) dy with h linear, minus the
        // trapezoid share node 1 already carries.
        return sum + (8.0 * mix.q[0] + mix.cell0) / (3.0 * std::sqrt(std::numbers::pi * mix.w[1]));
    }
    return mixture_I0_from_F(mix);
}

Mixture source_mixture(const SourceFunction& h, const Transform& f_z, double lambda) {
    Mixture mix;
    const auto y = h.grid();
    const auto wts = trapezoid_weights(y);
    mix.q.resize(y.size());
    mix.w.resize(y.size());
    for (std::size_t k = 0; k < y.size(); ++k) {
        mix.q[k] = wts[k] * h.values()[k];
        mix.w[k] = std::max(0.0, 1.0 - f_z(lambda * y[k]));
    }
    mix.cell0 = 0.5 * (y[1] - y[0]) * h.values()[1];
    return mix;
}

void check_lambda(double lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw ConfigError(fmt::format("lambda must be finite and non-negative (lambda={})", lambda));
    }
}

}  // namespace

double MqcSpectrum::total() const {
    double s = 0.0;
    for (double v : I) s += v;
    return s;
}

double MqcSpectrum::width() const {
    double m2 = 0.0, norm = 0.0;
    for (int m = -N; m <= N; ++m) {
        m2 += static_cast<double>(m) * m * (*this)(m);
        norm += (*this)(m);
    }
    return std::sqrt(m2 / norm);
}

std::vector<double> phi_grid(std::size_t K) {
    std::vector<double> phi(K);
    for (std::size_t k = 0; k < K; ++k) {
        phi[k] = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(K);
    }
    return phi;
}

MqcSpectrum mqc_spectrum_from_F(std::span<const double> F, int N, double time) {
    if (N < 1) {
        throw ConfigError(fmt::format("N must be positive (N={})", N));
    }
    const std::size_t K = F.size();
    if (K < static_cast<std::size_t>(2 * N + 1)) {
        throw GuardError(fmt::format("{} phi samples alias coherence orders up to {}; need at least {}", K, N,
                                     2 * N + 1));
    }
    MqcSpectrum out;
    out.N = N;
    out.time = time;
    out.I.resize(static_cast<std::size_t>(2 * N + 1));
    for (int m = -N; m <= N; ++m) {
        std::complex<double> acc = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            const double phase = -2.0 * std::numbers::pi * static_cast<double>(m) * static_cast<double>(k) /
                                 static_cast<double>(K);
            acc += F[k] * std::polar(1.0, phase);
        }
        out.I[static_cast<std::size_t>(m + N)] = acc.real() / static_cast<double>(K);
    }
    for (int m = -N; m <= N; ++m) {
        if (out(m) < -1e-10) {
            throw ConfigError(fmt::format("MQC weight I({}) = {:.3g} is negative", m, out(m)));
        }
        if (std::abs(out(m) - out(-m)) > 1e-10) {
            throw ConfigError(fmt::format("MQC spectrum not symmetric: I({}) - I({}) = {:.3g}", m, -m,
                                          out(m) - out(-m)));
        }
    }
    if (std::abs(out.total() - 1.0) > 1e-8) {
        throw ConfigError(fmt::format("MQC sum rule violated: sum I = {:.12g}", out.total()));
    }
    return out;
}

double seft_F(const SourceFunction& h, const Transform& f_z, double lambda, double xi) {
    check_lambda(lambda);
    return mixture_F(source_mixture(h, f_z, lambda), xi);
}

std::optional<double> seft_I(const SourceFunction& h, const Transform& f_z, double lambda, double u) {
    check_lambda(lambda);
    if (lambda == 0.0) {
        return std::nullopt;
    }
    return mixture_I(source_mixture(h, f_z, lambda), u);
}

std::optional<std::vector<double>> seft_I(const SourceFunction& h, const Transform& f_z, double lambda,
                                          std::span<const double> u) {
    check_lambda(lambda);
    if (lambda == 0.0) {
        return std::nullopt;
    }
    const Mixture mix = source_mixture(h, f_z, lambda);
    std::vector<double> out;
    out.reserve(u.size());
    for (double v : u) out.push_back(mixture_I(mix, v));
    return out;
}

namespace {

Mixture early_mixture(const ContinuumDistribution& early_z, double kappa, double t) {
    if (!(kappa > 0.0)) {
        throw ConfigError(fmt::format("kappa must be positive (kappa={})", kappa));
    }
    if (t < early_z.time()) {
        throw ConfigError(fmt::format("t={} precedes t0={}", t, early_z.time()));
    }
    const double sbar0 = mean_size(early_z);
    const double eta = std::exp(kappa * (t - early_z.time())) / (kScrambledSize * sbar0);
    const auto s = early_z.grid();
    const auto rho = early_z.density();
    const auto wts = trapezoid_weights(s);
    std::vector<double> W(s.size());
    double mass = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) {
        W[k] = wts[k] * rho[k];
        mass += W[k];
    }
    for (double& v : W) v /= mass;

    Mixture mix;
    mix.q = W;
    mix.w.resize(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        // 1 - S_z(nu) without cancellation.
        const double nu = eta * s[i];
        double acc = 0.0;
        for (std::size_t k = 0; k < s.size(); ++k) {
            acc += W[k] * -std::expm1(-nu * s[k]);
        }
        mix.w[i] = acc;
    }
    mix.cell0 = 0.5 * (s[1] - s[0]) * rho[1] / mass;
    return mix;
}

}  // namespace

double predict_Iz_from_early(const ContinuumDistribution& early_z, double kappa, double t, double u) {
    return mixture_I(early_mixture(early_z, kappa, t), u);
}

std::vector<double> predict_Iz_from_early(const ContinuumDistribution& early_z, double kappa, double t,
                                          std::span<const double> u) {
    const Mixture mix = early_mixture(early_z, kappa, t);
    std::vector<double> out;
    out.reserve(u.size());
    for (double v : u) out.push_back(mixture_I(mix, v));
    return out;
}

}  // namespace scramblon::mqc
