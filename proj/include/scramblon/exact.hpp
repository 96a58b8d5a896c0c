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

// Brute-force oracles at small N.
//
//  * the full 4^N Pauli-string Markov chain of the noise-averaged weights,
//  * Trotterized Brownian evolution of an explicit operator matrix,
//  * the doubled (system + auxiliary) state O|EPR>, on which operator size is
//    the number of per-site spin triplets.
//
// Conventions: qubit k is bit k of a computational basis index (bit value 0
// is spin up). A Pauli string has one base-4 digit per site, site 0 least
// significant, with digits I=0, X=1, Y=2, Z=3. Doubled states index
// amplitudes as sigma_bits | (tau_bits << N).

#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "scramblon/core.hpp"

namespace scramblon::exact {

inline constexpr int kMaxStateSites = 6;         // 2^6 x 2^6 operators, 12-qubit doubled states
inline constexpr int kMaxChainSites = 8;         // 4^8 = 65536 string weights
inline constexpr int kMaxCoefficientSites = 12;  // PauliCoefficients storage cap
inline constexpr int kMaxDoubledSites = 10;
inline constexpr double kMaxTrotterStep = 0.05;

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

bool anticommute(Pauli a, Pauli b);

class PauliString {
   public:
    explicit PauliString(std::vector<Pauli> code);

    /// Letters I/X/Y/Z (or '_' for identity), site 0 first.
    static PauliString from_text(std::string_view text);
    static PauliString from_index(int N, std::uint64_t index);
    static PauliString single(int N, int site, Pauli p);

    int N() const { return static_cast<int>(code_.size()); }
    /// Number of non-identity factors.
    int size() const;
    std::uint64_t index() const;
    Pauli operator[](int site) const { return code_.at(static_cast<std::size_t>(site)); }
    std::string str() const;

   private:
    std::vector<Pauli> code_;
};

/// Real coefficients of a Hermitian operator in the Pauli basis, normalized so
/// that sum c^2 = <O^2> = 1.
class PauliCoefficients {
   public:
    PauliCoefficients(int N, std::vector<double> c);

    static PauliCoefficients single(const PauliString& p);

    /// c_P = tr(P O) / 2^N. Throws ConfigError if O is not Hermitian.
    static PauliCoefficients from_matrix(const Matrix& op, int N);

    Matrix to_matrix() const;

    int N() const { return N_; }
    std::span<const double> coefficients() const { return c_; }
    double operator[](std::uint64_t index) const { return c_.at(index); }

   private:
    int N_;
    std::vector<double> c_;
};

/// Noise-averaged squared coefficients over all 4^N strings.
struct PauliWeights {
    int N = 0;
    std::vector<double> w;

    /// Histogram by string size, n = 1..N.
    SizeDistribution size_marginal(double time) const;
};

/// Direct size histogram sum_{size(P) = n} c_P^2. Requires a traceless operator.
SizeDistribution pauli_size_histogram(const PauliCoefficients& op, double time = 0.0);

/// Traceless Hermitian operator with i.i.d. Gaussian coefficients, normalized.
PauliCoefficients random_hermitian_operator(int N, std::uint64_t seed);

/// 2^N x 2^N matrix of a Pauli string.
Matrix pauli_matrix(const PauliString& p);

// ---------------------------------------------------------------------------
// Pauli-string Markov chain.

/// Evolves the 4^N-state weight master equation by RK4 with step dt. Every one
/// of the 15 non-trivial couplings of a pair (i, j) that anticommutes with a
/// string moves weight to its partner string at rate 1/(2N).
PauliWeights string_chain_evolve(int N, double t, double dt, const PauliString& initial);

/// Starts from Z on site 0.
PauliWeights string_chain_evolve(int N, double t, double dt);

// ---------------------------------------------------------------------------
// Trotterized Brownian circuit.

/// Per-realization seed derived from the run seed (SplitMix64).
std::uint64_t realization_seed(std::uint64_t seed, std::uint64_t realization);

/// One noise realization of O(t) = U^dagger O U, one step unitary
/// exp(-i J sum sigma sigma dB) per dt with dB ~ N(0, dt) and J = (8N)^(-1/2).
/// Negative t evolves backwards (the step generator changes sign).
Matrix evolve_brownian(const Matrix& op, int N, double t, double dt, std::uint64_t stream_seed);

struct TrotterResult {
    SizeDistribution mean;
    std::vector<double> stderr_;  // per size bin, n = 1..N
    int realizations = 0;
    std::uint64_t seed = 0;
    double dt = 0.0;
    /// Largest |sum c^2 - 1| over realizations (unitarity check).
    double max_norm_drift = 0.0;
};

TrotterResult trotter_brownian(int N, double t, double dt, int realizations, std::uint64_t seed,
                               const PauliString& initial);
TrotterResult trotter_brownian(int N, double t, double dt, int realizations, std::uint64_t seed);

/// F(phi_k, t) of every realization (outer index realization).
std::vector<std::vector<double>> trotter_F_samples(int N, double t, double dt, int realizations,
                                                   std::uint64_t seed, const PauliString& initial,
                                                   std::span<const double> phis);

// ---------------------------------------------------------------------------
// Doubled system.

class DoubledState {
   public:
    DoubledState(int N, Vector amplitudes);

    /// Product of per-site singlets (|up,down> - |down,up>)/sqrt(2).
    static DoubledState epr(int N);
    /// |O> = (O x 1)|EPR>.
    static DoubledState from_operator(const PauliCoefficients& op);

    int N() const { return N_; }
    const Vector& amplitudes() const { return amp_; }
    double norm() const { return amp_.norm(); }

   private:
    int N_;
    Vector amp_;
};

/// (s_tot)^2 = ((sigma + tau) / 2)^2 on one site, local index b_sigma + 2 b_tau.
Eigen::Matrix4cd site_total_spin_squared();

/// Applies a 4x4 operator to the (sigma_site, tau_site) qubit pair.
Vector apply_site_operator(const DoubledState& state, int site, const Eigen::Matrix4cd& op);

/// Projects onto eigenspaces of sum_j (s_tot^j)^2 / 2 and bins by eigenvalue.
/// Throws ConfigError when the state norm does not match the operator norm.
SizeDistribution size_from_doubled_state(const DoubledState& state, const PauliCoefficients& op);

/// e^{-3 nu / 4} <O| exp(-(nu / 4N) sum_j sigma^j . tau^j) |O>.
double generating_from_doubled_state(const DoubledState& state, double nu);

// ---------------------------------------------------------------------------

/// F(phi) = <e^{i phi S_z} O e^{-i phi S_z} O> by direct trace, N <= 6.
double mqc_F_exact(const PauliCoefficients& op, double phi);
double mqc_F_exact(const Matrix& op, int N, double phi);

}  // namespace scramblon::exact
