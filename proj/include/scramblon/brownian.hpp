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

// Operator size dynamics of the all-to-all Brownian spin circuit.
//
// Averaged over the noise, the squared Pauli coefficients of O(t) follow a
// classical Markov chain. Each anticommuting coupling moves weight at rate
// 4J^2 = 1/(2N). Lumping strings by size leaves a birth-death chain:
//
//   up(n)   = 3 n (N - n) / N   six raising couplings per inside/outside pair
//   down(n) = n (n - 1) / N     four lowering couplings per inside/inside pair
//
// Size-preserving moves do not change P(n) and are dropped.

#pragma once

#include <span>
#include <vector>

#include "scramblon/core.hpp"

namespace scramblon::brownian {

/// Lyapunov exponent fixed by the J = (8N)^(-1/2) normalization.
inline constexpr double kLyapunov = 3.0;

/// Explicit RK4 runs only when dt * max_n [up(n) + down(n)] <= this bound.
inline constexpr double kStabilityBound = 0.1;

struct BrownianParams {
    int N = 0;
    double kappa = kLyapunov;
    double dt = 0.0;
    double t_max = 0.0;
    std::vector<double> record_times;

    /// Throws ConfigError on malformed parameters. The stability guard is
    /// checked separately by integrate_master (GuardError).
    void validate() const;
};

struct BirthDeathRates {
    int N = 0;
    std::vector<double> up;    // up[n - 1] = up(n)
    std::vector<double> down;  // down[n - 1] = down(n)

    double max_total_rate() const;
    /// Largest dt satisfying the stability guard.
    double max_stable_dt() const { return kStabilityBound / max_total_rate(); }
};

BirthDeathRates build_rates(int N);

/// Right-hand side of dP(n)/dt for the size master equation.
void master_rhs(const BirthDeathRates& rates, std::span<const double> p, std::span<double> dp);

/// Fixed-step RK4 integration of the master equation; one snapshot per
/// record time. Throws GuardError when dt violates the stability guard.
std::vector<SizeDistribution> integrate_master(const BrownianParams& params, const SizeDistribution& initial);

/// Same, starting from a single Pauli operator: P(1) = 1.
std::vector<SizeDistribution> integrate_master(const BrownianParams& params);

/// Scrambled ensemble P(n) = 3^n binom(N, n) / (4^N - 1), built in log space.
SizeDistribution stationary_distribution(int N);

struct EarlyDistribution {
    ContinuumDistribution distribution;
    double mean;          // exp(kappa t0) / N
    bool outside_regime;  // exp(kappa t0) > 0.2 N
};

/// Thermodynamic-limit early-time distribution N e^{-kt0} exp(-s N e^{-kt0}).
EarlyDistribution analytic_early(int N, double t0, std::vector<double> s_grid);
EarlyDistribution analytic_early(int N, double t0, std::size_t grid_size = kDefaultGridSize);

/// Closed-form late-time distribution
///   N / (1 - s/s_sc)^2 exp(-kt - s N e^{-kt} / (1 - s/s_sc)),  s < s_sc,
/// and zero for s >= s_sc.
ContinuumDistribution analytic_late(int N, double t, std::vector<double> s_grid);
ContinuumDistribution analytic_late(int N, double t, std::size_t grid_size = kDefaultGridSize);

/// Unnormalized closed-form density at one point (zero for s >= s_sc).
double analytic_late_density(int N, double t, double s);

/// s_bar / s_sc = 1 + a e^a Ei(-a), a = s_sc N e^{-kappa t}.
double moment_formula(int N, double t);

/// Ei(x) for x < 0. Series around zero for |x| <= 1, continued fraction beyond.
double exp_integral(double x);

/// e^x E1(x) for x > 0, finite for arbitrarily large x.
double scaled_e1(double x);

}  // namespace scramblon::brownian
