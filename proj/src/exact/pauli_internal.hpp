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

// Bit tricks shared by the exact-module sources.

#pragma once

#include <bit>
#include <complex>
#include <cstdint>

namespace scramblon::exact::detail {

// Digit -> (x, z) symplectic bits. I=(0,0) X=(1,0) Y=(1,1) Z=(0,1).
inline constexpr int kXBit[4] = {0, 1, 1, 0};
inline constexpr int kZBit[4] = {0, 0, 1, 1};

inline bool anticommute_code(int a, int b) {
    return ((kXBit[a] & kZBit[b]) ^ (kZBit[a] & kXBit[b])) != 0;
}

/// Digit of the product a*b, phase dropped.
inline int product_code(int a, int b) {
    const int x = kXBit[a] ^ kXBit[b];
    const int z = kZBit[a] ^ kZBit[b];
    // (x, z) back to digit.
    static constexpr int kDigit[2][2] = {{0, 3}, {1, 2}};
    return kDigit[x][z];
}

inline int string_size(std::uint64_t idx) {
    int n = 0;
    while (idx != 0) {
        n += (idx & 3u) != 0;
        idx >>= 2;
    }
    return n;
}

struct Masks {
    std::uint64_t x = 0;   // sites flipped (X or Y)
    std::uint64_t z = 0;   // sites with a sign (Z or Y)
    int y_count = 0;
};

inline Masks masks_of(std::uint64_t idx, int N) {
    Masks m;
    for (int k = 0; k < N; ++k) {
        const int d = static_cast<int>((idx >> (2 * k)) & 3u);
        if (kXBit[d]) {
            m.x |= std::uint64_t{1} << k;
        }
        if (kZBit[d]) {
            m.z |= std::uint64_t{1} << k;
        }
        m.y_count += d == 2;
    }
    return m;
}

/// <b ^ x| P |b>. Per site X|b> = |1-b>, Z|b> = (-1)^b |b>, Y = iXZ.
inline std::complex<double> phase(const Masks& m, std::uint64_t b) {
    const int sign = std::popcount(b & m.z) & 1;
    static constexpr std::complex<double> kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const std::complex<double> ip = kIPow[m.y_count & 3];
    return sign ? -ip : ip;
}

}  // namespace scramblon::exact::detail
