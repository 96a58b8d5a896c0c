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
#include <random>

#include <fmt/format.h>

#include "pauli_internal.hpp"
#include "scramblon/errors.hpp"
#include "scramblon/exact.hpp"

namespace scramblon::exact {

namespace {

constexpr double kNormTolerance = 1e-9;

void check_sites(int N, int cap, const char* what) {
    if (N < 1 || N > cap) {
        throw ConfigError(fmt::format("{} supports 1 <= N <= {} (N={})", what, cap, N));
    }
}

}  // namespace

bool anticommute(Pauli a, Pauli b) {
    return detail::anticommute_code(static_cast<int>(a), static_cast<int>(b));
}

PauliString::PauliString(std::vector<Pauli> code) : code_(std::move(code)) {
    if (code_.empty()) {
        throw ConfigError("Pauli string needs at least one site");
    }
}

PauliString PauliString::from_text(std::string_view text) {
    std::vector<Pauli> code;
    for (char c : text) {
        switch (c) {
            case 'I':
            case '_':
                code.push_back(Pauli::I);
                break;
            case 'X':
                code.push_back(Pauli::X);
                break;
            case 'Y':
                code.push_back(Pauli::Y);
                break;
            case 'Z':
                code.push_back(Pauli::Z);
                break;
            default:
                throw ConfigError(fmt::format("bad Pauli letter '{}' in '{}'", c, text));
        }
    }
    return PauliString(std::move(code));
}

PauliString PauliString::from_index(int N, std::uint64_t index) {
    check_sites(N, kMaxCoefficientSites, "PauliString::from_index");
    if (index >= (std::uint64_t{1} << (2 * N))) {
        throw ConfigError(fmt::format("Pauli index {} out of range for N={}", index, N));
    }
    std::vector<Pauli> code(static_cast<std::size_t>(N));
    for (int k = 0; k < N; ++k) {
        code[k] = static_cast<Pauli>((index >> (2 * k)) & 3u);
    }
    return PauliString(std::move(code));
}

PauliString PauliString::single(int N, int site, Pauli p) {
    if (site < 0 || site >= N) {
        throw ConfigError(fmt::format("site {} out of range for N={}", site, N));
    }
    std::vector<Pauli> code(static_cast<std::size_t>(N), Pauli::I);
    code[site] = p;
    return PauliString(std::move(code));
}

int PauliString::size() const {
    int n = 0;
    for (Pauli p : code_) {
        n += p != Pauli::I;
    }
    return n;
}

std::uint64_t PauliString::index() const {
    std::uint64_t idx = 0;
    for (int k = N() - 1; k >= 0; --k) {
        idx = (idx << 2) | static_cast<std::uint64_t>(code_[k]);
    }
    return idx;
}

std::string PauliString::str() const {
    std::string out;
    for (Pauli p : code_) {
        out.push_back("IXYZ"[static_cast<int>(p)]);
    }
    return out;
}

// ---------------------------------------------------------------------------

PauliCoefficients::PauliCoefficients(int N, std::vector<double> c) : N_(N), c_(std::move(c)) {
    check_sites(N, kMaxCoefficientSites, "PauliCoefficients");
    if (c_.size() != (std::size_t{1} << (2 * N))) {
        throw ConfigError(fmt::format("expected 4^{} coefficients, got {}", N, c_.size()));
    }
    double norm = 0.0;
    for (double v : c_) {
        norm += v * v;
    }
    if (std::abs(norm - 1.0) > kNormTolerance) {
        throw ConfigError(fmt::format("operator not normalized: sum c^2 = {:.12g}", norm));
    }
}

PauliCoefficients PauliCoefficients::single(const PauliString& p) {
    std::vector<double> c(std::size_t{1} << (2 * p.N()), 0.0);
    c[p.index()] = 1.0;
    return PauliCoefficients(p.N(), std::move(c));
}

PauliCoefficients PauliCoefficients::from_matrix(const Matrix& op, int N) {
    check_sites(N, kMaxDoubledSites, "PauliCoefficients::from_matrix");
    const std::uint64_t D = std::uint64_t{1} << N;
    if (static_cast<std::uint64_t>(op.rows()) != D || static_cast<std::uint64_t>(op.cols()) != D) {
        throw ConfigError(fmt::format("operator must be {0}x{0} for N={1}", D, N));
    }
    const std::uint64_t count = D * D;
    std::vector<double> c(count);
    double worst_imag = 0.0;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
        const auto masks = detail::masks_of(idx, N);
        // tr(P O) = sum_b phase(b) O(b, b ^ x).
        std::complex<double> tr = 0.0;
        for (std::uint64_t b = 0; b < D; ++b) {
            tr += detail::phase(masks, b) * op(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b ^ masks.x));
        }
        tr /= static_cast<double>(D);
        c[idx] = tr.real();
        worst_imag = std::max(worst_imag, std::abs(tr.imag()));
    }
    if (worst_imag > 1e-10) {
        throw ConfigError(fmt::format("operator is not Hermitian (imaginary Pauli coefficient {:.3g})", worst_imag));
    }
    return PauliCoefficients(N, std::move(c));
}

Matrix PauliCoefficients::to_matrix() const {
    check_sites(N_, kMaxDoubledSites, "PauliCoefficients::to_matrix");
    const std::uint64_t D = std::uint64_t{1} << N_;
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(D), static_cast<Eigen::Index>(D));
    for (std::uint64_t idx = 0; idx < c_.size(); ++idx) {
        if (c_[idx] == 0.0) {
            continue;
        }
        const auto masks = detail::masks_of(idx, N_);
        for (std::uint64_t b = 0; b < D; ++b) {
            m(static_cast<Eigen::Index>(b ^ masks.x), static_cast<Eigen::Index>(b)) += c_[idx] * detail::phase(masks, b);
        }
    }
    return m;
}

Matrix pauli_matrix(const PauliString& p) {
    return PauliCoefficients::single(p).to_matrix();
}

// ---------------------------------------------------------------------------

SizeDistribution PauliWeights::size_marginal(double time) const {
    std::vector<double> p(static_cast<std::size_t>(N), 0.0);
    double identity = 0.0;
    for (std::uint64_t idx = 0; idx < w.size(); ++idx) {
        const int n = detail::string_size(idx);
        if (n == 0) {
            identity += w[idx];
        } else {
            p[n - 1] += w[idx];
        }
    }
    if (identity > kNormTolerance) {
        throw ConfigError(fmt::format("operator has an identity component (weight {:.3g})", identity));
    }
    return SizeDistribution(std::move(p), time);
}

SizeDistribution pauli_size_histogram(const PauliCoefficients& op, double time) {
    PauliWeights pw{op.N(), {}};
    pw.w.reserve(op.coefficients().size());
    for (double c : op.coefficients()) {
        pw.w.push_back(c * c);
    }
    return pw.size_marginal(time);
}

PauliCoefficients random_hermitian_operator(int N, std::uint64_t seed) {
    check_sites(N, kMaxCoefficientSites, "random_hermitian_operator");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> c(std::size_t{1} << (2 * N), 0.0);
    double norm = 0.0;
    for (std::size_t k = 1; k < c.size(); ++k) {
        c[k] = gauss(rng);
        norm += c[k] * c[k];
    }
    norm = std::sqrt(norm);
    for (double& v : c) {
        v /= norm;
    }
    return PauliCoefficients(N, std::move(c));
}

// ---------------------------------------------------------------------------

double mqc_F_exact(const Matrix& op, int N, double phi) {
    check_sites(N, kMaxStateSites, "mqc_F_exact");
    const Eigen::Index D = Eigen::Index{1} << N;
    if (op.rows() != D || op.cols() != D) {
        throw ConfigError(fmt::format("operator must be {0}x{0} for N={1}", D, N));
    }
    // With S_z diagonal, F = (1/D) sum_ab e^{i phi (m_a - m_b)} O_ab O_ba.
    std::vector<std::complex<double>> rot(static_cast<std::size_t>(D));
    for (Eigen::Index a = 0; a < D; ++a) {
        const double m = 0.5 * N - std::popcount(static_cast<std::uint64_t>(a));
        rot[a] = std::polar(1.0, phi * m);
    }
    std::complex<double> total = 0.0;
    for (Eigen::Index b = 0; b < D; ++b) {
        for (Eigen::Index a = 0; a < D; ++a) {
            total += rot[a] * std::conj(rot[b]) * op(a, b) * op(b, a);
        }
    }
    return total.real() / static_cast<double>(D);
}

double mqc_F_exact(const PauliCoefficients& op, double phi) {
    return mqc_F_exact(op.to_matrix(), op.N(), phi);
}

}  // namespace scramblon::exact
