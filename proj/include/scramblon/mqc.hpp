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

// Multiple-quantum coherence (MQC).
//
// F(phi, t) = <e^{i phi S_z} O(t) e^{-i phi S_z} O(t)> and its Fourier series
// I(m, t) over coherence orders m. In the continuum, xi = sqrt(N) phi and
// u = m / sqrt(N), and SEFT gives
//
//   F(xi) = int dy h(y) exp(-(xi^2 / 4) (1 - f_z(lambda y)))
//   I(u)  = int dy h(y) [pi w]^{-1/2} exp(-u^2 / w),   w = 1 - f_z(lambda y).

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "scramblon/core.hpp"

namespace scramblon::mqc {

/// Below this, w = 1 - f_z is a nascent delta: zero for u != 0.
inline constexpr double kDeltaThreshold = 1e-14;

struct MqcSpectrum {
    int N = 0;
    double time = 0.0;
    std::vector<double> I;  // I[m + N], m = -N..N

    double operator()(int m) const { return I.at(static_cast<std::size_t>(m + N)); }
    double total() const;
    /// Standard deviation of m under I.
    double width() const;
};

/// phi_k = 2 pi k / K, k = 0..K-1.
std::vector<double> phi_grid(std::size_t K);

/// I(m) = (1/K) sum_k F(phi_k) e^{-i m phi_k}. Throws GuardError when
/// K < 2N + 1 and ConfigError when the spectrum breaks positivity
/// (-1e-10), the sum rule (1e-8) or m -> -m symmetry (1e-10).
MqcSpectrum mqc_spectrum_from_F(std::span<const double> F, int N, double time = 0.0);

double seft_F(const SourceFunction& h, const Transform& f_z, double lambda, double xi);

/// Nullopt at lambda = 0, where I(u) is delta(u). The u = 0 value is
/// obtained from (1/pi) int_0^inf F(xi) dxi whenever some weight sits at w = 0.
std::optional<double> seft_I(const SourceFunction& h, const Transform& f_z, double lambda, double u);

/// I_z(u, t) from early-time size data of a z operator, with
/// w(s1) = 1 - S_z(eta s1) and eta = e^{kappa (t - t0)} / (s_sc sbar0).
double predict_Iz_from_early(const ContinuumDistribution& early_z, double kappa, double t, double u);

/// Same on a u grid, sharing the O(M^2) width table.
std::vector<double> predict_Iz_from_early(const ContinuumDistribution& early_z, double kappa, double t,
                                          std::span<const double> u);

/// seft_I on a u grid; nullopt at lambda = 0.
std::optional<std::vector<double>> seft_I(const SourceFunction& h, const Transform& f_z, double lambda,
                                          std::span<const double> u);

}  // namespace scramblon::mqc
