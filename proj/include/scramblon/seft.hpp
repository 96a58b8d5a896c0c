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

// Scramblon effective field theory (SEFT) predictions for operator size.
//
// The central object is the consistency relation: if the SEFT describes a
// model, the late-time size distribution is fixed by the early-time one,
//
//   P(s, t) = int ds1 P(s1, t0) delta(s - g(s1)),
//   g(s1)   = s_sc (1 - S0(eta s1)),   eta = e^{kappa (t - t0)} / (s_sc sbar0),
//
// where S0 is the generating function of the early data. No other model
// parameter enters.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "scramblon/core.hpp"

namespace scramblon::seft {

/// Early-regime guard for fitting and prediction, on sbar0 / s_sc.
inline constexpr double kEarlyRegimeBound = 0.1;

// ---------------------------------------------------------------------------
// Forward closed form.

/// P(s) = int dy h(y) delta(s - s_sc (1 - fbar(lambda y))), fbar the average of
/// the given transforms (one or three). Evaluated by the change of variables
/// y -> s(y), which is increasing because fbar is. lambda = 0 and
/// lambda = infinity give the narrowest grid-resolvable peak at s = 0 and
/// s = s_sc (1 - fbar(inf)). Throws ConfigError if fbar increases on the grid.
ContinuumDistribution forward_size_distribution(const SourceFunction& h, std::span<const Transform> f_by_alpha,
                                                double lambda, std::vector<double> s_grid);
ContinuumDistribution forward_size_distribution(const SourceFunction& h, std::span<const Transform> f_by_alpha,
                                                double lambda, std::size_t grid_size = kDefaultGridSize);

// ---------------------------------------------------------------------------
// Lyapunov exponent from early sizes.

struct KappaFit {
    double kappa = 0.0;
    double kappa_stderr = 0.0;
    double log_intercept = 0.0;
    std::vector<std::pair<double, double>> t0_points;  // (t0, sbar0)
    double r_squared = 0.0;  // NaN when degenerate
    /// sbar0 does not vary: no growth to fit.
    bool degenerate = false;
};

/// Least squares of log sbar0 against t0. Needs >= 3 points, distinct times,
/// and every sbar0 / s_sc <= 0.1.
KappaFit fit_kappa(std::span<const std::pair<double, double>> points);
KappaFit fit_kappa(std::span<const SizeDistribution> early_data);

// ---------------------------------------------------------------------------
// Consistency relation.

enum class DeltaMethod { gaussian_delta, change_of_variables };

const char* to_string(DeltaMethod m);
DeltaMethod delta_method_from_string(const std::string& name);

struct PredictionConfig {
    DeltaMethod method = DeltaMethod::change_of_variables;
    /// Width of the Gaussian stand-in for the delta function.
    double sigma = 1e-2;
    /// 0 keeps the early data's own grid; otherwise resample uniformly.
    std::size_t s1_grid_size = 0;
    std::size_t s2_grid_size = 0;
    std::size_t output_grid_size = kDefaultGridSize;

    /// Throws ConfigError; for gaussian_delta requires sigma >= 2 * output spacing.
    void validate() const;
};

/// The map g(s1) built from early data, with g' and g^-1.
class ConsistencyMap {
   public:
    /// Early data is trimmed where density < 1e-18 * peak.
    ConsistencyMap(const ContinuumDistribution& early, double kappa, double elapsed,
                   std::size_t s2_grid_size = 0);

    double eta() const { return eta_; }
    double early_mean() const { return sbar0_; }

    /// S0(nu) on the early data.
    double generating(double nu) const;
    double g(double s1) const;
    double g_prime(double s1) const;
    /// Solves g(s1) = s on [0, hi] (safeguarded Newton). Requires g(0) <= s <= g(hi).
    double inverse(double s, double hi) const;

   private:
    std::vector<double> s2_;
    std::vector<double> weighted_;  // trapezoid weight * density
    double sbar0_ = 0.0;
    double eta_ = 0.0;
};

/// Late-time distribution predicted from early data at early.time().
/// Throws ConfigError if t < t0; warns (in the output) if sbar0/s_sc > 0.1.
ContinuumDistribution predict_late(const ContinuumDistribution& early, double kappa, double t,
                                   const PredictionConfig& cfg = {});

/// sbar(t) = s_sc (1 - int int P0(s1) P0(s2) exp(-eta s1 s2)), nested trapezoid.
double predict_mean(const ContinuumDistribution& early, double kappa, double t, std::size_t s2_grid_size = 0);

// ---------------------------------------------------------------------------
// Comparison.

struct Distance {
    double l1 = 0.0;
    double sup = 0.0;
    double ks = 0.0;
};

/// Distances on the union of both grids (linear interpolation, zero outside a grid).
Distance distribution_distance(const ContinuumDistribution& a, const ContinuumDistribution& b);

/// Fraction of grid points where lo - tol <= value <= hi + tol.
double band_containment(std::span<const double> value, std::span<const double> lo, std::span<const double> hi,
                        double tol);

struct ProtocolOptions {
    /// Admissible t0: sbar0 / s_sc inside this window.
    double t0_window_lo = 0.03;
    double t0_window_hi = 0.05;
    /// Snapshots with sbar0 / s_sc <= this feed fit_kappa.
    double fit_window_hi = 0.01;
    /// to_continuum resolution of early snapshots.
    std::size_t early_grid_size = 2049;
    PredictionConfig prediction;
    /// Containment tolerance relative to the measured peak.
    double containment_tolerance = 1e-8;
    /// L1 above which a late time is flagged as a finite-size deviation.
    double finite_size_l1 = 0.05;
    /// Optional fixed kappa; skips the fit when set.
    std::optional<double> kappa;
};

struct BandSnapshot {
    double t = 0.0;
    std::vector<double> s;
    std::vector<double> lo;
    std::vector<double> hi;
    std::vector<double> center;
    std::vector<double> measured;
    double l1 = 0.0;
    double sup = 0.0;
    double ks = 0.0;
    double containment = 0.0;
    bool finite_size_flag = false;
};

struct ProtocolReport {
    KappaFit fit;
    bool kappa_fixed = false;
    std::vector<double> t0_list;
    std::vector<double> t0_mean_ratio;  // sbar0 / s_sc per t0
    std::vector<BandSnapshot> per_time;
    std::vector<std::string> warnings;
};

/// Protocol: fit kappa on the earliest snapshots, predict every later
/// snapshot from each admissible t0, band the predictions pointwise (min, max)
/// and compare the band center with the measurement. Late snapshots are those
/// after the last admissible t0.
ProtocolReport run_protocol(std::span<const SizeDistribution> size_data, const ProtocolOptions& options = {});

}  // namespace scramblon::seft
