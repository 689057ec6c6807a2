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

// AVX2 variants. This translation unit is the only one built with -mavx2; it
// must not be entered unless isa_available(Isa::avx2).

#include "bellab/simd/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace bellab::simd::detail {

namespace {

// 32x32 -> 64 multiply of eight unsigned lanes, split into high and low words.
inline void mulhilo(__m256i a, __m256i m, __m256i& hi, __m256i& lo) {
    const __m256i even = _mm256_mul_epu32(a, m);
    const __m256i odd = _mm256_mul_epu32(_mm256_srli_epi64(a, 32), m);
    lo = _mm256_blend_epi32(even, _mm256_slli_epi64(odd, 32), 0xAA);
    hi = _mm256_blend_epi32(_mm256_srli_epi64(even, 32), odd, 0xAA);
}

// Eight independent Philox4x32-10 blocks, one per lane.
inline void philox8(__m256i& c0, __m256i& c1, __m256i& c2, __m256i& c3, PhiloxKey key) {
    const __m256i m0 = _mm256_set1_epi32(static_cast<int>(kPhiloxM0));
    const __m256i m1 = _mm256_set1_epi32(static_cast<int>(kPhiloxM1));
    for (int r = 0; r < 10; ++r) {
        __m256i hi0, lo0, hi1, lo1;
        mulhilo(c0, m0, hi0, lo0);
        mulhilo(c2, m1, hi1, lo1);
        const __m256i k0 = _mm256_set1_epi32(static_cast<int>(key.k0));
        const __m256i k1 = _mm256_set1_epi32(static_cast<int>(key.k1));
        c0 = _mm256_xor_si256(_mm256_xor_si256(hi1, c1), k0);
        c1 = lo1;
        c2 = _mm256_xor_si256(_mm256_xor_si256(hi0, c3), k1);
        c3 = lo0;
        key.k0 += kPhiloxW0;
        key.k1 += kPhiloxW1;
    }
}

}  // namespace

void round_words_avx2(PhiloxKey key, std::uint64_t first_round, std::uint32_t* out, std::size_t rounds) {
    constexpr std::size_t kLanes = 8;
    std::size_t r = 0;
    alignas(32) std::uint32_t lo[kLanes];
    alignas(32) std::uint32_t hi[kLanes];
    alignas(32) std::uint32_t words[4][kLanes];
    for (; r + kLanes <= rounds; r += kLanes) {
        for (std::size_t lane = 0; lane < kLanes; ++lane) {
            const std::uint64_t round = first_round + r + lane;
            lo[lane] = static_cast<std::uint32_t>(round);
            hi[lane] = static_cast<std::uint32_t>(round >> 32);
        }
        for (std::uint32_t block = 0; block < 2; ++block) {
            __m256i c0 = _mm256_load_si256(reinterpret_cast<const __m256i*>(lo));
            __m256i c1 = _mm256_load_si256(reinterpret_cast<const __m256i*>(hi));
            __m256i c2 = _mm256_set1_epi32(static_cast<int>(block));
            __m256i c3 = _mm256_setzero_si256();
            philox8(c0, c1, c2, c3, key);
            _mm256_store_si256(reinterpret_cast<__m256i*>(words[0]), c0);
            _mm256_store_si256(reinterpret_cast<__m256i*>(words[1]), c1);
            _mm256_store_si256(reinterpret_cast<__m256i*>(words[2]), c2);
            _mm256_store_si256(reinterpret_cast<__m256i*>(words[3]), c3);
            for (std::size_t lane = 0; lane < kLanes; ++lane) {
                std::uint32_t* dst = out + (r + lane) * kWordsPerRound + block * 4;
                dst[0] = words[0][lane];
                dst[1] = words[1][lane];
                dst[2] = words[2][lane];
                dst[3] = words[3][lane];
            }
        }
    }
    if (r < rounds) round_words_scalar(key, first_round + r, out + r * kWordsPerRound, rounds - r);
}

void binary_proof_chain_avx2(const double* cells, std::size_t count, std::size_t stride, double* out) {
    constexpr std::size_t kLanes = 4;
    const __m256d sign_mask = _mm256_set1_pd(-0.0);
    std::size_t t = 0;
    for (; t + kLanes <= count; t += kLanes) {
        __m256d corr[4] = {_mm256_setzero_pd(), _mm256_setzero_pd(), _mm256_setzero_pd(), _mm256_setzero_pd()};
        __m256d bound[4] = {_mm256_setzero_pd(), _mm256_setzero_pd(), _mm256_setzero_pd(), _mm256_setzero_pd()};
        for (std::size_t c = 0; c < kBinaryCells; ++c) {
            const __m256d v = _mm256_loadu_pd(cells + c * stride + t);
            for (std::size_t p = 0; p < 4; ++p) {
                corr[p] = _mm256_add_pd(corr[p], _mm256_mul_pd(_mm256_set1_pd(binary_cell_sign(p, c)), v));
            }
            for (std::size_t l = 0; l < 4; ++l) {
                bound[l] = _mm256_add_pd(bound[l], _mm256_mul_pd(_mm256_set1_pd(binary_cell_bound(l, c)), v));
            }
        }
        for (std::size_t p = 0; p < 4; ++p) _mm256_storeu_pd(out + p * stride + t, corr[p]);
        for (std::size_t l = 0; l < 4; ++l) {
            __m256d s = _mm256_setzero_pd();
            for (std::size_t p = 0; p < 4; ++p) {
                s = _mm256_add_pd(s, _mm256_mul_pd(_mm256_set1_pd(p == l ? -1.0 : 1.0), corr[p]));
            }
            _mm256_storeu_pd(out + (4 + l) * stride + t, _mm256_andnot_pd(sign_mask, s));
            _mm256_storeu_pd(out + (8 + l) * stride + t, bound[l]);
        }
    }
    if (t < count) {
        // Tail tables through the reference path, offset so indexing matches.
        binary_proof_chain_scalar(cells + t, count - t, stride, out + t);
    }
}

}  // namespace bellab::simd::detail

#endif
