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

#include <array>
#include <cmath>

#include <fmt/format.h>

#include "pauli_internal.hpp"
#include "scramblon/brownian.hpp"
#include "scramblon/errors.hpp"
#include "scramblon/exact.hpp"

namespace scramblon::exact {

namespace {

// Partners of a local pair (a, b) under the 15 non-trivial couplings that
// anticommute with it. Always 0 or 8 entries.
struct LocalMoves {
    int count = 0;
    std::array<std::uint8_t, 8> target{};  // a' + 4 b'
};

std::array<LocalMoves, 16> build_local_moves() {
    std::array<LocalMoves, 16> table{};
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            LocalMoves& m = table[a + 4 * b];
            for (int mu = 0; mu < 4; ++mu) {
                for (int nu = 0; nu < 4; ++nu) {
                    if (mu == 0 && nu == 0) {
                        continue;
                    }
                    // sigma^mu x sigma^nu anticommutes with a x b iff exactly one factor does.
                    if (detail::anticommute_code(mu, a) == detail::anticommute_code(nu, b)) {
                        continue;
                    }
                    m.target[m.count++] = static_cast<std::uint8_t>(detail::product_code(mu, a) +
                                                                    4 * detail::product_code(nu, b));
                }
            }
        }
    }
    return table;
}

class ChainStepper {
   public:
    explicit ChainStepper(int N) : N_(N), rate_(1.0 / (2.0 * N)), moves_(build_local_moves()) {
        const std::size_t dim = std::size_t{1} << (2 * N);
        k1_.resize(dim);
        k2_.resize(dim);
        k3_.resize(dim);
        k4_.resize(dim);
        tmp_.resize(dim);
    }

    void rhs(const std::vector<double>& w, std::vector<double>& dw) const {
        const std::uint64_t dim = w.size();
        for (std::uint64_t s = 0; s < dim; ++s) {
            double acc = 0.0;
            for (int i = 0; i < N_; ++i) {
                const int a = static_cast<int>((s >> (2 * i)) & 3u);
                for (int j = i + 1; j < N_; ++j) {
                    const int b = static_cast<int>((s >> (2 * j)) & 3u);
                    const LocalMoves& m = moves_[a + 4 * b];
                    if (m.count == 0) {
                        continue;
                    }
                    const std::uint64_t base = s & ~((std::uint64_t{3} << (2 * i)) | (std::uint64_t{3} << (2 * j)));
                    for (int k = 0; k < m.count; ++k) {
                        const std::uint64_t ap = m.target[k] & 3u;
                        const std::uint64_t bp = m.target[k] >> 2;
                        acc += w[base | (ap << (2 * i)) | (bp << (2 * j))];
                    }
                    acc -= m.count * w[s];
                }
            }
            dw[s] = rate_ * acc;
        }
    }

    void step(std::vector<double>& w, double h) {
        const std::size_t dim = w.size();
        rhs(w, k1_);
        for (std::size_t s = 0; s < dim; ++s) tmp_[s] = w[s] + 0.5 * h * k1_[s];
        rhs(tmp_, k2_);
        for (std::size_t s = 0; s < dim; ++s) tmp_[s] = w[s] + 0.5 * h * k2_[s];
        rhs(tmp_, k3_);
        for (std::size_t s = 0; s < dim; ++s) tmp_[s] = w[s] + h * k3_[s];
        rhs(tmp_, k4_);
        for (std::size_t s = 0; s < dim; ++s) {
            w[s] += h / 6.0 * (k1_[s] + 2.0 * k2_[s] + 2.0 * k3_[s] + k4_[s]);
        }
    }

    /// Largest total out-rate of any string: 8 couplings on every pair.
    double max_rate() const { return rate_ * 8.0 * N_ * (N_ - 1) / 2.0; }

   private:
    int N_;
    double rate_;
    std::array<LocalMoves, 16> moves_;
    std::vector<double> k1_, k2_, k3_, k4_, tmp_;
};

}  // namespace

PauliWeights string_chain_evolve(int N, double t, double dt, const PauliString& initial) {
    if (N < 2 || N > kMaxChainSites) {
        throw ConfigError(fmt::format("string chain supports 2 <= N <= {} (N={}); 4^N weights", kMaxChainSites, N));
    }
    if (initial.N() != N) {
        throw ConfigError(fmt::format("initial string has {} sites, expected {}", initial.N(), N));
    }
    if (initial.size() == 0) {
        throw ConfigError("initial string must not be the identity");
    }
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw ConfigError(fmt::format("t must be non-negative (t={})", t));
    }
    if (!(dt > 0.0)) {
        throw ConfigError(fmt::format("dt must be positive (dt={})", dt));
    }
    ChainStepper stepper(N);
    const double bound = brownian::kStabilityBound / stepper.max_rate();
    if (dt > bound) {
        throw GuardError(fmt::format("string chain step too large: dt={} but stability needs dt <= {:.6g}", dt, bound));
    }

    PauliWeights out;
    out.N = N;
    out.w.assign(std::size_t{1} << (2 * N), 0.0);
    out.w[initial.index()] = 1.0;
    if (t == 0.0) {
        return out;
    }
    const auto steps = static_cast<long long>(std::ceil(t / dt - 1e-9));
    const double h = t / static_cast<double>(steps);
    for (long long k = 0; k < steps; ++k) {
        stepper.step(out.w, h);
    }
    for (double& v : out.w) {
        if (v < 0.0 && v > -kClampTolerance) {
            v = 0.0;
        }
    }
    return out;
}

PauliWeights string_chain_evolve(int N, double t, double dt) {
    return string_chain_evolve(N, t, dt, PauliString::single(N, 0, Pauli::Z));
}

}  // namespace scramblon::exact
