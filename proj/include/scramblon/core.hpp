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

// Domain types for operator size distributions and the transforms that
// connect them: discrete P(n) -> continuum P(s), generating functions, and
// Laplace transforms of scramblon source functions.

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace scramblon {

/// Mean size fraction of a maximally scrambled spin-1/2 operator: three of
/// the four single-site Paulis are non-identity.
inline constexpr double kScrambledSize = 0.75;

/// Default number of points of a continuum s-grid on [0, 1].
inline constexpr std::size_t kDefaultGridSize = 512;

/// Probabilities in [-kClampTolerance, 0) are integrator noise and are
/// clamped to zero; anything more negative is a logic error.
inline constexpr double kClampTolerance = 1e-12;

// ---------------------------------------------------------------------------
// Grids and quadrature. All integrals in the project are trapezoidal sums on
// explicit grids.

std::vector<double> uniform_grid(double lo, double hi, std::size_t n);

/// Points hi * (k / (n - 1))^power, k = 0..n-1. Concentrates resolution near
/// zero, where early-time size distributions and Laplace kernels live.
std::vector<double> graded_grid(double hi, std::size_t n, double power);

double trapezoid(std::span<const double> x, std::span<const double> f);

/// Running trapezoid integral; result[0] = 0.
std::vector<double> cumulative_trapezoid(std::span<const double> x, std::span<const double> f);

/// Trapezoid weights w such that sum_k w_k f_k is the trapezoid integral.
std::vector<double> trapezoid_weights(std::span<const double> x);

/// Piecewise-linear interpolation; values outside [x.front(), x.back()] are
/// clamped to the endpoint values.
double interpolate_linear(std::span<const double> x, std::span<const double> f, double at);

std::vector<double> resample_linear(std::span<const double> x, std::span<const double> f,
                                    std::span<const double> new_x);

// ---------------------------------------------------------------------------

/// Operator size distribution P(n), n = 1..N, at a given circuit time.
class SizeDistribution {
   public:
    /// `p[k]` is the weight on size n = k + 1. Throws ConfigError if an entry
    /// is below -1e-12 or if the total differs from 1 by more than 1e-9.
    /// Entries in [-1e-12, 0) are clamped to zero.
    SizeDistribution(std::vector<double> p, double time);

    /// All weight on size n.
    static SizeDistribution point_mass(int N, int n, double time = 0.0);

    int N() const { return static_cast<int>(p_.size()); }
    double time() const { return time_; }

    /// P(n) for 1 <= n <= N.
    double operator()(int n) const { return p_.at(static_cast<std::size_t>(n - 1)); }
    std::span<const double> probabilities() const { return p_; }

   private:
    std::vector<double> p_;
    double time_;
};

/// Sampled continuum density P(s) on an ascending grid inside [0, 1].
class ContinuumDistribution {
   public:
    /// Validates the grid, non-negativity, and unit trapezoid mass (1e-6).
    ContinuumDistribution(std::vector<double> s_grid, std::vector<double> density, double time,
                          std::vector<std::string> warnings = {});

    /// Rescales samples to unit trapezoid mass. The pre-rescaling mass is kept
    /// in raw_mass(). Negative samples above -1e-12 * peak are clamped.
    static ContinuumDistribution normalized(std::vector<double> s_grid, std::vector<double> density,
                                            double time, std::vector<std::string> warnings = {});

    /// Narrowest grid-resolvable peak: all mass on the node nearest to `s`.
    static ContinuumDistribution point_mass(std::vector<double> s_grid, double s, double time);

    std::span<const double> grid() const { return s_; }
    std::span<const double> density() const { return rho_; }
    double time() const { return time_; }
    double raw_mass() const { return raw_mass_; }
    const std::vector<std::string>& warnings() const { return warnings_; }
    std::size_t size() const { return s_.size(); }

    /// Density at an arbitrary s by linear interpolation; zero outside the grid.
    double at(double s) const;

   private:
    std::vector<double> s_;
    std::vector<double> rho_;
    double time_;
    double raw_mass_ = 1.0;
    std::vector<std::string> warnings_;
};

/// Scramblon propagator parameters: lambda(t) = exp(kappa t) / C.
struct ScramblonParams {
    double kappa;
    double C;
    double s_sc = kScrambledSize;

    /// Throws ConfigError unless kappa > 0, C > 0 and s_sc == 3/4.
    void validate() const;
    double lambda(double t) const;
};

/// Source function h(y) >= 0 whose moments are the scramblon vertices.
class SourceFunction {
   public:
    /// Requires an ascending non-negative grid, h >= 0 and unit mass (1e-6).
    SourceFunction(std::vector<double> y_grid, std::vector<double> h);

    /// Rescales h to unit mass; the original mass is kept as
    /// weight_normalization().
    static SourceFunction normalized(std::vector<double> y_grid, std::vector<double> h);

    static SourceFunction sample(std::vector<double> y_grid, const std::function<double(double)>& fn);

    std::span<const double> grid() const { return y_; }
    std::span<const double> values() const { return h_; }
    double weight_normalization() const { return weight_; }

   private:
    SourceFunction(std::vector<double> y_grid, std::vector<double> h, double weight);

    std::vector<double> y_;
    std::vector<double> h_;
    double weight_ = 1.0;
};

// ---------------------------------------------------------------------------
// Operations.

/// P(s) = N * P(round(sN)) on a uniform grid of `grid_size` points, with the
/// size index clamped into [1, N]; renormalized to unit trapezoid mass. Adds a
/// resolution warning when the grid cannot resolve the distribution.
ContinuumDistribution to_continuum(const SizeDistribution& d, std::size_t grid_size = kDefaultGridSize);

/// sum_n (n / N) P(n).
double mean_size(const SizeDistribution& d);

/// Trapezoid mean of s over the density.
double mean_size(const ContinuumDistribution& d);

/// S(nu) = sum_n P(n) exp(-nu n / N).
double generating_function(const SizeDistribution& d, double nu);

/// S(nu) = int ds P(s) exp(-nu s).
double generating_function(const ContinuumDistribution& d, double nu);

struct LaplaceResult {
    double value;
    bool underflow;  // integrand underflowed everywhere; value forced to 0
};

/// f(x) = int dy h(y) exp(-x y), x >= 0.
LaplaceResult laplace_of_source(const SourceFunction& h, double x);

/// Callable f(x) built from a source function, with its first derivative.
/// Also the type used to pass f_alpha / f_z transforms around.
using Transform = std::function<double(double)>;

class LaplaceTransform {
   public:
    explicit LaplaceTransform(SourceFunction h) : h_(std::move(h)) {}

    double operator()(double x) const;
    /// f'(x) = -int dy y h(y) exp(-x y).
    double derivative(double x) const;
    const SourceFunction& source() const { return h_; }

   private:
    SourceFunction h_;
};

}  // namespace scramblon
