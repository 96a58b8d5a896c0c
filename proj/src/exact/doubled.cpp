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

#include <bit>
#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>
#include <fmt/format.h>

#include "scramblon/errors.hpp"
#include "scramblon/exact.hpp"

namespace scramblon::exact {

namespace {

using Local = Eigen::Matrix4cd;

// Single-qubit Paulis, basis |0> = up.
Eigen::Matrix2cd pauli2(int which) {
    using C = std::complex<double>;
    Eigen::Matrix2cd m;
    switch (which) {
        case 1:
            m << 0, 1, 1, 0;
            break;
        case 2:
            m << 0, C(0, -1), C(0, 1), 0;
            break;
        case 3:
            m << 1, 0, 0, -1;
            break;
        default:
            m.setIdentity();
    }
    return m;
}

// Operator acting on sigma (low local bit) or tau (high local bit).
Local on_sigma(int which) {
    return Eigen::kroneckerProduct(Eigen::Matrix2cd::Identity(), pauli2(which)).eval();
}
Local on_tau(int which) {
    return Eigen::kroneckerProduct(pauli2(which), Eigen::Matrix2cd::Identity()).eval();
}

void check_doubled(int N) {
    if (N < 1 || N > kMaxDoubledSites) {
        throw ConfigError(fmt::format("doubled states support 1 <= N <= {} (N={})", kMaxDoubledSites, N));
    }
}

}  // namespace

DoubledState::DoubledState(int N, Vector amplitudes) : N_(N), amp_(std::move(amplitudes)) {
    check_doubled(N);
    if (amp_.size() != (Eigen::Index{1} << (2 * N))) {
        throw ConfigError(fmt::format("doubled state needs 4^{} amplitudes, got {}", N, amp_.size()));
    }
}

DoubledState DoubledState::epr(int N) {
    check_doubled(N);
    const std::uint64_t D = std::uint64_t{1} << N;
    const std::uint64_t mask = D - 1;
    Vector amp = Vector::Zero(static_cast<Eigen::Index>(D * D));
    const double scale = std::pow(2.0, -0.5 * N);
    // Per site (|0>_s|1>_t - |1>_s|0>_t)/sqrt(2): tau = ~sigma, sign (-1)^|sigma|.
    for (std::uint64_t s = 0; s < D; ++s) {
        const std::uint64_t tau = ~s & mask;
        const double sign = (std::popcount(s) & 1) ? -1.0 : 1.0;
        amp[static_cast<Eigen::Index>(s | (tau << N))] = sign * scale;
    }
    return DoubledState(N, std::move(amp));
}

DoubledState DoubledState::from_operator(const PauliCoefficients& op) {
    const int N = op.N();
    check_doubled(N);
    const Eigen::Index D = Eigen::Index{1} << N;
    const DoubledState e = epr(N);
    // Column-major D x D view: row sigma, column tau.
    const Eigen::Map<const Matrix> E(e.amplitudes().data(), D, D);
    Matrix prod = op.to_matrix() * E;
    return DoubledState(N, Eigen::Map<Vector>(prod.data(), D * D));
}

Local site_total_spin_squared() {
    Local s2 = Local::Zero();
    for (int a = 1; a <= 3; ++a) {
        const Local s = 0.5 * (on_sigma(a) + on_tau(a));
        s2 += s * s;
    }
    return s2;
}

Vector apply_site_operator(const DoubledState& state, int site, const Local& op) {
    const int N = state.N();
    if (site < 0 || site >= N) {
        throw ConfigError(fmt::format("site {} out of range for N={}", site, N));
    }
    const std::uint64_t bs = std::uint64_t{1} << site;
    const std::uint64_t bt = std::uint64_t{1} << (site + N);
    const Vector& in = state.amplitudes();
    Vector out(in.size());
    const auto dim = static_cast<std::uint64_t>(in.size());
    for (std::uint64_t base = 0; base < dim; ++base) {
        if (base & (bs | bt)) {
            continue;
        }
        const std::uint64_t idx[4] = {base, base | bs, base | bt, base | bs | bt};
        Eigen::Vector4cd local;
        for (int l = 0; l < 4; ++l) {
            local[l] = in[static_cast<Eigen::Index>(idx[l])];
        }
        const Eigen::Vector4cd res = op * local;
        for (int l = 0; l < 4; ++l) {
            out[static_cast<Eigen::Index>(idx[l])] = res[l];
        }
    }
    return out;
}

SizeDistribution size_from_doubled_state(const DoubledState& state, const PauliCoefficients& op) {
    const int N = state.N();
    if (op.N() != N) {
        throw ConfigError(fmt::format("operator has {} sites, state has {}", op.N(), N));
    }
    double op_norm = 0.0;
    for (double c : op.coefficients()) {
        op_norm += c * c;
    }
    const double state_norm = state.amplitudes().squaredNorm();
    if (std::abs(state_norm - op_norm) > 1e-9) {
        throw ConfigError(fmt::format("state norm {:.12g} does not match operator norm {:.12g}; not O|EPR>",
                                      state_norm, op_norm));
    }
    // (s_tot)^2 / 2 is the triplet projector on each site.
    const Local triplet = 0.5 * site_total_spin_squared();
    const Local singlet = Local::Identity() - triplet;

    // sectors[n]: component with exactly n triplets among the sites processed so far.
    std::vector<Vector> sectors{state.amplitudes()};
    for (int site = 0; site < N; ++site) {
        std::vector<Vector> next(sectors.size() + 1, Vector::Zero(state.amplitudes().size()));
        for (std::size_t n = 0; n < sectors.size(); ++n) {
            const DoubledState part(N, sectors[n]);
            next[n] += apply_site_operator(part, site, singlet);
            next[n + 1] += apply_site_operator(part, site, triplet);
        }
        sectors = std::move(next);
    }
    const double identity = sectors[0].squaredNorm();
    if (identity > 1e-10) {
        throw ConfigError(fmt::format("operator has an identity component (weight {:.3g})", identity));
    }
    std::vector<double> p(static_cast<std::size_t>(N));
    for (int n = 1; n <= N; ++n) {
        p[n - 1] = sectors[n].squaredNorm();
    }
    return SizeDistribution(std::move(p), 0.0);
}

double generating_from_doubled_state(const DoubledState& state, double nu) {
    const int N = state.N();
    Local dot = Local::Zero();
    for (int a = 1; a <= 3; ++a) {
        dot += on_sigma(a) * on_tau(a);
    }
    Eigen::SelfAdjointEigenSolver<Local> solver(dot);
    const Eigen::Vector4cd decay =
        solver.eigenvalues().unaryExpr([&](double e) { return std::complex<double>(std::exp(-nu / (4.0 * N) * e)); });
    const Local gate = solver.eigenvectors() * decay.asDiagonal() * solver.eigenvectors().adjoint();
    Vector psi = state.amplitudes();
    for (int site = 0; site < N; ++site) {
        psi = apply_site_operator(DoubledState(N, std::move(psi)), site, gate);
    }
    return std::exp(-0.75 * nu) * state.amplitudes().dot(psi).real();
}

}  // namespace scramblon::exact
