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

#if defined(__SSE2__)
#include <xmmintrin.h>
#endif

#include "scramblon/brownian.hpp"
#include "scramblon/errors.hpp"

namespace scramblon::brownian {

void BrownianParams::validate() const {
    if (N < 2) {
        throw ConfigError(fmt::format("invalid model: Brownian circuit needs N >= 2 (N={})", N));
    }
    if (kappa != kLyapunov) {
        throw ConfigError(fmt::format("kappa is fixed to {} by the coupling normalization (got {})", kLyapunov, kappa));
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw ConfigError(fmt::format("dt must be positive (dt={})", dt));
    }
    if (!(t_max >= 0.0) || !std::isfinite(t_max)) {
        throw ConfigError(fmt::format("t_max must be non-negative (t_max={})", t_max));
    }
    for (std::size_t k = 0; k < record_times.size(); ++k) {
        const double t = record_times[k];
        if (t < 0.0 || t > t_max) {
            throw ConfigError(fmt::format("record time {} outside [0, t_max={}]", t, t_max));
        }
        if (k > 0 && !(t > record_times[k - 1])) {
            throw ConfigError("record_times must be strictly ascending");
        }
    }
}

BirthDeathRates build_rates(int N) {
    if (N < 2) {
        throw ConfigError(fmt::format("invalid model: Brownian circuit needs N >= 2 (N={})", N));
    }
    BirthDeathRates r;
    r.N = N;
    r.up.resize(static_cast<std::size_t>(N));
    r.down.resize(static_cast<std::size_t>(N));
    const double dN = N;
    for (int n = 1; n <= N; ++n) {
        r.up[n - 1] = 3.0 * n * (N - n) / dN;
        r.down[n - 1] = static_cast<double>(n) * (n - 1) / dN;
    }
    return r;
}

double BirthDeathRates::max_total_rate() const {
    double best = 0.0;
    for (std::size_t k = 0; k < up.size(); ++k) best = std::max(best, up[k] + down[k]);
    return best;
}

void master_rhs(const BirthDeathRates& rates, std::span<const double> p, std::span<double> dp) {
    const std::size_t N = rates.up.size();
    if (p.size() != N || dp.size() != N) {
        throw ConfigError("master_rhs: vector length does not match N");
    }
    const double* up = rates.up.data();
    const double* dn = rates.down.data();
    for (std::size_t k = 0; k < N; ++k) {
        double v = -(up[k] + dn[k]) * p[k];
        if (k > 0) v += up[k - 1] * p[k - 1];
        if (k + 1 < N) v += dn[k + 1] * p[k + 1];
        dp[k] = v;
    }
}

namespace {

// The far tail of P(n) ahead of the spreading front sits at subnormal
// magnitudes, where arithmetic is ~100x slower. Flush them to zero while
// integrating; they are below any tolerance we check.
class FlushDenormals {
   public:
#if defined(__SSE2__)
    FlushDenormals() : saved_(_mm_getcsr()) { _mm_setcsr(saved_ | 0x8040); }
    ~FlushDenormals() { _mm_setcsr(saved_); }

   private:
    unsigned int saved_;
#endif
};

// Padded RK4 stepper. Index 0 and N + 1 are permanent zeros so the stencil
// needs no boundary branches.
class MasterStepper {
   public:
    explicit MasterStepper(const BirthDeathRates& rates)
        : n_(rates.up.size()),
          up_(n_ + 2, 0.0),
          dn_(n_ + 2, 0.0),
          tot_(n_ + 2, 0.0),
          k1_(n_ + 2, 0.0),
          k2_(n_ + 2, 0.0),
          k3_(n_ + 2, 0.0),
          k4_(n_ + 2, 0.0),
          tmp_(n_ + 2, 0.0) {
        for (std::size_t k = 0; k < n_; ++k) {
            up_[k + 1] = rates.up[k];
            dn_[k + 1] = rates.down[k];
            tot_[k + 1] = rates.up[k] + rates.down[k];
        }
    }

    void step(std::vector<double>& p, double h) {
        rhs(p.data(), k1_.data());
        axpy(p.data(), k1_.data(), 0.5 * h, tmp_.data());
        rhs(tmp_.data(), k2_.data());
        axpy(p.data(), k2_.data(), 0.5 * h, tmp_.data());
        rhs(tmp_.data(), k3_.data());
        axpy(p.data(), k3_.data(), h, tmp_.data());
        rhs(tmp_.data(), k4_.data());
        const double w = h / 6.0;
        double* __restrict pp = p.data();
        const double* __restrict a = k1_.data();
        const double* __restrict b = k2_.data();
        const double* __restrict c = k3_.data();
        const double* __restrict d = k4_.data();
        for (std::size_t k = 1; k <= n_; ++k) {
            pp[k] += w * (a[k] + 2.0 * (b[k] + c[k]) + d[k]);
        }
    }

   private:
    void rhs(const double* __restrict p, double* __restrict out) const {
        const double* __restrict up = up_.data();
        const double* __restrict dn = dn_.data();
        const double* __restrict tot = tot_.data();
        for (std::size_t k = 1; k <= n_; ++k) {
            out[k] = up[k - 1] * p[k - 1] + dn[k + 1] * p[k + 1] - tot[k] * p[k];
        }
    }

    void axpy(const double* __restrict x, const double* __restrict y, double a, double* __restrict out) const {
        for (std::size_t k = 1; k <= n_; ++k) out[k] = x[k] + a * y[k];
    }

    std::size_t n_;
    std::vector<double> up_, dn_, tot_;
    std::vector<double> k1_, k2_, k3_, k4_, tmp_;
};

}  // namespace

std::vector<SizeDistribution> integrate_master(const BrownianParams& params, const SizeDistribution& initial) {
    params.validate();
    if (initial.N() != params.N) {
        throw ConfigError(fmt::format("initial distribution has N={} but params.N={}", initial.N(), params.N));
    }
    const auto rates = build_rates(params.N);
    const double max_dt = rates.max_stable_dt();
    if (params.dt > max_dt) {
        throw GuardError(fmt::format("stability guard: dt={} exceeds the RK4 limit; need dt <= {:.6g} for N={}",
                                     params.dt, max_dt, params.N));
    }

    FlushDenormals ftz;
    MasterStepper stepper(rates);
    const auto n = static_cast<std::size_t>(params.N);
    std::vector<double> p(n + 2, 0.0);
    const auto init = initial.probabilities();
    std::copy(init.begin(), init.end(), p.begin() + 1);

    std::vector<SizeDistribution> snapshots;
    snapshots.reserve(params.record_times.size());
    double t = 0.0;
    for (double target : params.record_times) {
        const double span = target - t;
        if (span > 0.0) {
            const auto steps = static_cast<long long>(std::ceil(span / params.dt - 1e-9));
            const double h = span / static_cast<double>(std::max(steps, 1LL));
            for (long long s = 0; s < steps; ++s) stepper.step(p, h);
        }
        t = target;
        if (target == 0.0) {
            snapshots.push_back(SizeDistribution(std::vector<double>(init.begin(), init.end()), 0.0));
        } else {
            snapshots.emplace_back(std::vector<double>(p.begin() + 1, p.begin() + 1 + static_cast<long>(n)), t);
        }
    }
    return snapshots;
}

std::vector<SizeDistribution> integrate_master(const BrownianParams& params) {
    if (params.N < 2) {
        throw ConfigError(fmt::format("invalid model: Brownian circuit needs N >= 2 (N={})", params.N));
    }
    return integrate_master(params, SizeDistribution::point_mass(params.N, 1));
}

SizeDistribution stationary_distribution(int N) {
    if (N < 1) {
        throw ConfigError(fmt::format("stationary_distribution: N must be positive (N={})", N));
    }
    // Ratio recursion w(n+1)/w(n) = 3(N-n)/(n+1) outward from the mode, so
    // detailed balance holds to a few ulps; lgamma differences lose ~1e-12 at N ~ 1e3.
    const auto n_sites = static_cast<std::size_t>(N);
    std::vector<double> w(n_sites, 0.0);
    const int mode = std::clamp(static_cast<int>(std::floor((3.0 * N + 3.0) / 4.0)), 1, N);
    w[mode - 1] = 1.0;
    for (int n = mode; n < N; ++n) w[n] = w[n - 1] * (3.0 * (N - n)) / (n + 1.0);
    for (int n = mode - 1; n >= 1; --n) w[n - 1] = w[n] * (n + 1.0) / (3.0 * (N - n));
    double total = 0.0;
    for (double v : w) total += v;
    std::vector<double> p(n_sites);
    for (std::size_t k = 0; k < n_sites; ++k) p[k] = w[k] / total;
    return SizeDistribution(std::move(p), std::numeric_limits<double>::infinity());
}

}  // namespace scramblon::brownian
