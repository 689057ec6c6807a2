// Copyright 2026 The Bellab Authors
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

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

#include "bellab/simd/dispatch.hpp"

namespace bellab::simd {

// ---------------------------------------------------------------------------
// Philox4x32-10 counter-based generator
// ---------------------------------------------------------------------------

struct PhiloxKey {
    std::uint32_t k0 = 0;
    std::uint32_t k1 = 0;
};

using PhiloxBlock = std::array<std::uint32_t, 4>;

inline constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
inline constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
inline constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

constexpr PhiloxBlock philox4x32(PhiloxBlock ctr, PhiloxKey key) {
    for (int r = 0; r < 10; ++r) {
        const std::uint64_t p0 = std::uint64_t{kPhiloxM0} * ctr[0];
        const std::uint64_t p1 = std::uint64_t{kPhiloxM1} * ctr[2];
        ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key.k0, static_cast<std::uint32_t>(p1),
               static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key.k1, static_cast<std::uint32_t>(p0)};
        key.k0 += kPhiloxW0;
        key.k1 += kPhiloxW1;
    }
    return ctr;
}

constexpr PhiloxKey philox_key(std::uint64_t seed) {
    return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

/// Words drawn per simulated round: two Philox blocks with counters
/// (round_lo, round_hi, 0, 0) and (round_lo, round_hi, 1, 0).
inline constexpr std::size_t kWordsPerRound = 8;

/// Fill `out` with the words of rounds first_round, first_round + 1, ...;
/// word w of round r lands at out[(r - first_round) * 8 + w].
/// `out.size()` must be a multiple of kWordsPerRound.
void round_words(Isa isa, PhiloxKey key, std::uint64_t first_round, std::span<std::uint32_t> out);
void round_words(PhiloxKey key, std::uint64_t first_round, std::span<std::uint32_t> out);

/// Uniform variate in (0, 1) with 2^-32 resolution.
constexpr double to_unit(std::uint32_t w) { return (static_cast<double>(w) + 0.5) * 0x1p-32; }

// ---------------------------------------------------------------------------
// Proof-chain evaluation for standard-binary joint tables
// ---------------------------------------------------------------------------

inline constexpr std::size_t kBinaryCells = 16;
/// Outputs per table: 4 correlations, 4 list values, 4 averaged bounds.
inline constexpr std::size_t kProofChainOutputs = 12;

/// `cells` holds `count` tables column-wise: cell c of table t at
/// cells[c * stride + t]. Output o of table t goes to out[o * stride + t].
/// Requires count <= stride, cells.size() >= 16 * stride and
/// out.size() >= 12 * stride.
void binary_proof_chain(Isa isa, std::span<const double> cells, std::size_t count, std::size_t stride,
                        std::span<double> out);
void binary_proof_chain(std::span<const double> cells, std::size_t count, std::size_t stride, std::span<double> out);

namespace detail {

void round_words_scalar(PhiloxKey key, std::uint64_t first_round, std::uint32_t* out, std::size_t rounds);
void binary_proof_chain_scalar(const double* cells, std::size_t count, std::size_t stride, double* out);

#if defined(__x86_64__) || defined(_M_X64)
void round_words_avx2(PhiloxKey key, std::uint64_t first_round, std::uint32_t* out, std::size_t rounds);
void binary_proof_chain_avx2(const double* cells, std::size_t count, std::size_t stride, double* out);
#endif

/// Sign of a_i b_k etc. for pair p at binary cell c (outcome index 0 is +1).
constexpr double binary_cell_sign(std::size_t pair, std::size_t cell) {
    const std::size_t i = (cell >> 3) & 1;  // A
    const std::size_t j = (cell >> 2) & 1;  // A'
    const std::size_t k = (cell >> 1) & 1;  // B
    const std::size_t l = cell & 1;         // B'
    const std::size_t x = pair >= 2 ? j : i;
    const std::size_t y = pair % 2 == 1 ? l : k;
    return (x ^ y) ? -1.0 : 1.0;
}

/// |sum_p coef[list][p] * sign(p, cell)|: the lemma expression at a cell.
constexpr double binary_cell_bound(std::size_t list, std::size_t cell) {
    double s = 0.0;
    for (std::size_t p = 0; p < 4; ++p) s += (p == list ? -1.0 : 1.0) * binary_cell_sign(p, cell);
    return s < 0.0 ? -s : s;
}

}  // namespace detail

}  // namespace bellab::simd
