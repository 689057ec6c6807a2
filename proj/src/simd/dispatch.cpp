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

#include <cmath>
#include <cstdlib>
#include <string>

#include "bellab/errors.hpp"
#include "bellab/simd/kernels.hpp"

namespace bellab::simd {

std::string_view to_string(Isa isa) {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
    }
    return "?";
}

std::optional<Isa> parse_isa(std::string_view name) {
    if (name == "scalar") return Isa::scalar;
    if (name == "avx2") return Isa::avx2;
    return std::nullopt;
}

bool isa_available(Isa isa) {
    switch (isa) {
        case Isa::scalar: return true;
        case Isa::avx2:
#if defined(__x86_64__) || defined(_M_X64)
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
    }
    return false;
}

Isa active_isa() {
    static const Isa resolved = [] {
        if (const char* env = std::getenv("BELLAB_SIMD")) {
            if (auto requested = parse_isa(env); requested && isa_available(*requested)) return *requested;
        }
        return isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar;
    }();
    return resolved;
}

namespace {

void require(Isa isa) {
    if (!isa_available(isa)) throw DomainError("instruction set " + std::string(to_string(isa)) + " is unavailable");
}

}  // namespace

void round_words(Isa isa, PhiloxKey key, std::uint64_t first_round, std::span<std::uint32_t> out) {
    if (out.size() % kWordsPerRound != 0) throw DomainError("round_words: output size not a multiple of 8");
    require(isa);
    const std::size_t rounds = out.size() / kWordsPerRound;
#if defined(__x86_64__) || defined(_M_X64)
    if (isa == Isa::avx2) {
        detail::round_words_avx2(key, first_round, out.data(), rounds);
        return;
    }
#endif
    detail::round_words_scalar(key, first_round, out.data(), rounds);
}

void round_words(PhiloxKey key, std::uint64_t first_round, std::span<std::uint32_t> out) {
    round_words(active_isa(), key, first_round, out);
}

void binary_proof_chain(Isa isa, std::span<const double> cells, std::size_t count, std::size_t stride,
                        std::span<double> out) {
    if (count > stride || cells.size() < kBinaryCells * stride || out.size() < kProofChainOutputs * stride) {
        throw DomainError("binary_proof_chain: buffer shapes do not match stride");
    }
    require(isa);
#if defined(__x86_64__) || defined(_M_X64)
    if (isa == Isa::avx2) {
        detail::binary_proof_chain_avx2(cells.data(), count, stride, out.data());
        return;
    }
#endif
    detail::binary_proof_chain_scalar(cells.data(), count, stride, out.data());
}

void binary_proof_chain(std::span<const double> cells, std::size_t count, std::size_t stride,
                        std::span<double> out) {
    binary_proof_chain(active_isa(), cells, count, stride, out);
}

namespace detail {

void round_words_scalar(PhiloxKey key, std::uint64_t first_round, std::uint32_t* out, std::size_t rounds) {
    for (std::size_t r = 0; r < rounds; ++r) {
        const std::uint64_t round = first_round + r;
        const auto lo = static_cast<std::uint32_t>(round);
        const auto hi = static_cast<std::uint32_t>(round >> 32);
        for (std::uint32_t block = 0; block < 2; ++block) {
            const PhiloxBlock w = philox4x32({lo, hi, block, 0}, key);
            for (std::size_t i = 0; i < 4; ++i) out[r * kWordsPerRound + block * 4 + i] = w[i];
        }
    }
}

void binary_proof_chain_scalar(const double* cells, std::size_t count, std::size_t stride, double* out) {
    for (std::size_t t = 0; t < count; ++t) {
        double corr[4] = {0.0, 0.0, 0.0, 0.0};
        double bound[4] = {0.0, 0.0, 0.0, 0.0};
        for (std::size_t c = 0; c < kBinaryCells; ++c) {
            const double v = cells[c * stride + t];
            for (std::size_t p = 0; p < 4; ++p) corr[p] = corr[p] + binary_cell_sign(p, c) * v;
            for (std::size_t l = 0; l < 4; ++l) bound[l] = bound[l] + binary_cell_bound(l, c) * v;
        }
        for (std::size_t p = 0; p < 4; ++p) out[p * stride + t] = corr[p];
        for (std::size_t l = 0; l < 4; ++l) {
            double s = 0.0;
            for (std::size_t p = 0; p < 4; ++p) s = s + (p == l ? -1.0 : 1.0) * corr[p];
            out[(4 + l) * stride + t] = std::fabs(s);
            out[(8 + l) * stride + t] = bound[l];
        }
    }
}

}  // namespace detail

}  // namespace bellab::simd
