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
#include <random>

#include <fmt/format.h>

#include "pauli_internal.hpp"
#include "scramblon/errors.hpp"
#include "scramblon/exact.hpp"
#include "scramblon/parallel.hpp"

namespace scramblon::exact {

namespace {

struct Coupling {
    detail::Masks masks;
};

// All sigma^mu_i sigma^nu_j with i < j and (mu, nu) != (I, I), in a fixed
// order so that noise draws are reproducible.
std::vector<Coupling> pair_couplings(int N) {
    std::vector<Coupling> out;
    for (int i = 0; i < N; ++i) {
        for (int j = i + 1; j < N; ++j) {
            for (std::uint64_t mu = 0; mu < 4; ++mu) {
                for (std::uint64_t nu = 0; nu < 4; ++nu) {
                    if (mu == 0 && nu == 0) {
                        continue;
                    }
                    const std::uint64_t idx = (mu << (2 * i)) | (nu << (2 * j));
                    out.push_back({detail::masks_of(idx, N)});
                }
            }
        }
    }
    return out;
}

void check_trotter(int N, double t, double dt) {
    if (N < 2 || N > kMaxStateSites) {
        throw ConfigError(fmt::format("Trotter evolution supports 2 <= N <= {} (N={})", kMaxStateSites, N));
    }
    if (!std::isfinite(t)) {
        throw ConfigError("t must be finite");
    }
    if (!(dt > 0.0)) {
        throw ConfigError(fmt::format("dt must be positive (dt={})", dt));
    }
    if (dt > kMaxTrotterStep) {
        throw GuardError(fmt::format("Trotter step too large: dt={} but the guard needs dt <= {}", dt, kMaxTrotterStep));
    }
}

}  // namespace

std::uint64_t realization_seed(std::uint64_t seed, std::uint64_t realization) {
    // SplitMix64 applied to the seed offset by the realization counter.
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (realization + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

Matrix evolve_brownian(const Matrix& op, int N, double t, double dt, std::uint64_t stream_seed) {
    check_trotter(N, t, dt);
    const Eigen::Index D = Eigen::Index{1} << N;
    if (op.rows() != D || op.cols() != D) {
        throw ConfigError(fmt::format("operator must be {0}x{0} for N={1}", D, N));
    }
    const std::vector<Coupling> couplings = pair_couplings(N);
    const double J = 1.0 / std::sqrt(8.0 * N);
    const double span = std::abs(t);
    const double direction = t < 0.0 ? -1.0 : 1.0;
    const long long steps = span == 0.0 ? 0 : static_cast<long long>(std::ceil(span / dt - 1e-9));
    const double h = steps == 0 ? 0.0 : span / static_cast<double>(steps);

    std::mt19937_64 rng(stream_seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::SelfAdjointEigenSolver<Matrix> solver;
    Matrix O = op;
    Matrix H(D, D);
    Matrix U(D, D);
    for (long long step = 0; step < steps; ++step) {
        H.setZero();
        for (const Coupling& c : couplings) {
            const double xi = direction * J * std::sqrt(h) * gauss(rng);
            for (Eigen::Index b = 0; b < D; ++b) {
                H(static_cast<Eigen::Index>(static_cast<std::uint64_t>(b) ^ c.masks.x), b) +=
                    xi * detail::phase(c.masks, static_cast<std::uint64_t>(b));
            }
        }
        solver.compute(H);
        const Eigen::VectorXcd phases =
            solver.eigenvalues().unaryExpr([](double e) { return std::polar(1.0, -e); });
        U.noalias() = solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
        O = U.adjoint() * O * U;
    }
    return O;
}

TrotterResult trotter_brownian(int N, double t, double dt, int realizations, std::uint64_t seed,
                               const PauliString& initial) {
    check_trotter(N, t, dt);
    if (realizations < 2) {
        throw ConfigError(fmt::format("need at least 2 realizations for error bars (got {})", realizations));
    }
    if (initial.N() != N || initial.size() == 0) {
        throw ConfigError("initial string must be a non-identity string on N sites");
    }
    const Matrix op = pauli_matrix(initial);
    std::vector<std::vector<double>> hist(static_cast<std::size_t>(realizations));
    std::vector<double> drift(static_cast<std::size_t>(realizations), 0.0);
    parallel_for(hist.size(), [&](std::size_t r) {
        const Matrix evolved = evolve_brownian(op, N, t, dt, realization_seed(seed, r));
        // Norm drift is measured before PauliCoefficients re-checks it.
        const double norm = evolved.squaredNorm() / static_cast<double>(evolved.rows());
        drift[r] = std::abs(norm - 1.0);
        const PauliCoefficients coeffs = PauliCoefficients::from_matrix(evolved, N);
        const SizeDistribution d = pauli_size_histogram(coeffs, t);
        hist[r].assign(d.probabilities().begin(), d.probabilities().end());
    });

    std::vector<double> mean(static_cast<std::size_t>(N), 0.0);
    std::vector<double> sq(static_cast<std::size_t>(N), 0.0);
    for (const auto& h : hist) {
        for (int n = 0; n < N; ++n) {
            mean[n] += h[n];
        }
    }
    const double R = realizations;
    for (double& m : mean) {
        m /= R;
    }
    for (const auto& h : hist) {
        for (int n = 0; n < N; ++n) {
            sq[n] += (h[n] - mean[n]) * (h[n] - mean[n]);
        }
    }
    std::vector<double> err(static_cast<std::size_t>(N));
    for (int n = 0; n < N; ++n) {
        err[n] = std::sqrt(sq[n] / (R - 1.0) / R);
    }
    double max_drift = 0.0;
    for (double d : drift) {
        max_drift = std::max(max_drift, d);
    }
    return TrotterResult{SizeDistribution(std::move(mean), t), std::move(err), realizations, seed, dt, max_drift};
}

TrotterResult trotter_brownian(int N, double t, double dt, int realizations, std::uint64_t seed) {
    return trotter_brownian(N, t, dt, realizations, seed, PauliString::single(N, 0, Pauli::Z));
}

std::vector<std::vector<double>> trotter_F_samples(int N, double t, double dt, int realizations,
                                                   std::uint64_t seed, const PauliString& initial,
                                                   std::span<const double> phis) {
    check_trotter(N, t, dt);
    if (realizations < 1) {
        throw ConfigError("need at least one realization");
    }
    if (initial.N() != N || initial.size() == 0) {
        throw ConfigError("initial string must be a non-identity string on N sites");
    }
    const Matrix op = pauli_matrix(initial);
    std::vector<std::vector<double>> out(static_cast<std::size_t>(realizations));
    parallel_for(out.size(), [&](std::size_t r) {
        const Matrix evolved = evolve_brownian(op, N, t, dt, realization_seed(seed, r));
        out[r].reserve(phis.size());
        for (double phi : phis) {
            out[r].push_back(mqc_F_exact(evolved, N, phi));
        }
    });
    return out;
}

}  // namespace scramblon::exact
