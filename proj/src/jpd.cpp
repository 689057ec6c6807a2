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

#include "bellab/jpd.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bellab/errors.hpp"
#include "bellab/simd/kernels.hpp"

namespace bellab {

namespace {

std::array<std::size_t, 4> dims(const ObservableQuartet& q) {
    return {q.size(Observable::A), q.size(Observable::Ap), q.size(Observable::B), q.size(Observable::Bp)};
}

std::string cell_name(std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    return "p(" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) + "," + std::to_string(l) +
           ")";
}

}  // namespace

Jpd::Jpd(ObservableQuartet quartet, std::vector<double> table)
    : quartet_(std::move(quartet)), n_(dims(quartet_)), table_(std::move(table)) {
    if (table_.size() != quartet_.joint_size()) {
        throw InvalidJpd("joint table has " + std::to_string(table_.size()) + " entries, quartet needs " +
                         std::to_string(quartet_.joint_size()));
    }
}

Jpd Jpd::uniform(ObservableQuartet quartet) {
    const std::size_t n = quartet.joint_size();
    return Jpd(std::move(quartet), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Jpd Jpd::point_mass(ObservableQuartet quartet, std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    const std::size_t n = quartet.joint_size();
    Jpd p(std::move(quartet), std::vector<double>(n, 0.0));
    p.at(i, j, k, l) = 1.0;
    return p;
}

void validate_jpd(const Jpd& p) {
    const auto& q = p.quartet();
    double sum = 0.0;
    for (std::size_t i = 0; i < q.size(Observable::A); ++i) {
        for (std::size_t j = 0; j < q.size(Observable::Ap); ++j) {
            for (std::size_t k = 0; k < q.size(Observable::B); ++k) {
                for (std::size_t l = 0; l < q.size(Observable::Bp); ++l) {
                    const double v = p(i, j, k, l);
                    if (!std::isfinite(v) || v < -kTolerance) {
                        throw InvalidJpd(cell_name(i, j, k, l) + " = " + std::to_string(v) + " is negative");
                    }
                    sum += v;
                }
            }
        }
    }
    if (std::abs(sum - 1.0) > kTolerance) throw InvalidJpd("joint table sums to " + std::to_string(sum));
}

CorrelationSet correlations_from_jpd(const Jpd& p) {
    const auto& q = p.quartet();
    const auto n = dims(q);
    // Pairwise marginals first, then the double sum over outcome values.
    std::array<std::vector<double>, 4> marg;
    for (SettingPair pr : kSettingPairs) marg[index(pr)].assign(q.rows(pr) * q.cols(pr), 0.0);
    for (std::size_t i = 0; i < n[0]; ++i) {
        for (std::size_t j = 0; j < n[1]; ++j) {
            for (std::size_t k = 0; k < n[2]; ++k) {
                for (std::size_t l = 0; l < n[3]; ++l) {
                    const double v = p(i, j, k, l);
                    marg[0][i * n[2] + k] += v;
                    marg[1][i * n[3] + l] += v;
                    marg[2][j * n[2] + k] += v;
                    marg[3][j * n[3] + l] += v;
                }
            }
        }
    }
    std::array<double, 4> e{};
    for (SettingPair pr : kSettingPairs) {
        const auto& xs = q.outcomes(Side::A, a_variant(pr));
        const auto& ys = q.outcomes(Side::B, b_variant(pr));
        double s = 0.0;
        for (std::size_t x = 0; x < xs.size(); ++x) {
            for (std::size_t y = 0; y < ys.size(); ++y) s += xs[x] * ys[y] * marg[index(pr)][x * ys.size() + y];
        }
        e[index(pr)] = std::clamp(s, -1.0, 1.0);
    }
    return CorrelationSet(e);
}

std::array<double, 4> single_means_from_jpd(const Jpd& p) {
    const auto& q = p.quartet();
    const auto n = dims(q);
    std::array<double, 4> m{};
    for (std::size_t i = 0; i < n[0]; ++i) {
        for (std::size_t j = 0; j < n[1]; ++j) {
            for (std::size_t k = 0; k < n[2]; ++k) {
                for (std::size_t l = 0; l < n[3]; ++l) {
                    const double v = p(i, j, k, l);
                    m[0] += q.outcomes(Observable::A)[i] * v;
                    m[1] += q.outcomes(Observable::Ap)[j] * v;
                    m[2] += q.outcomes(Observable::B)[k] * v;
                    m[3] += q.outcomes(Observable::Bp)[l] * v;
                }
            }
        }
    }
    return m;
}

ChshValues bell_verify(const Jpd& p) {
    validate_jpd(p);
    const ChshValues v = chsh_list_values(correlations_from_jpd(p));
    for (std::size_t l = 0; l < 4; ++l) {
        if (v[l] > 2.0 + kTolerance) {
            throw TheoremViolation("CHSH list " + std::string(chsh_list_name(l)) + " = " + std::to_string(v[l]) +
                                   " exceeds 2 for a valid joint distribution");
        }
    }
    return v;
}

Jpd jpd_from_local_model(const FiniteMicrostateModel& m) {
    if (!m.has_local_decomposition()) throw NotLocal("model has microstates without a local response");
    const auto& q = m.quartet();
    const auto n = dims(q);
    std::vector<double> table(q.joint_size(), 0.0);
    for (const auto& ms : m.microstates()) {
        const auto& pa = ms.local->distribution(Observable::A);
        const auto& pap = ms.local->distribution(Observable::Ap);
        const auto& pb = ms.local->distribution(Observable::B);
        const auto& pbp = ms.local->distribution(Observable::Bp);
        std::size_t c = 0;
        for (std::size_t i = 0; i < n[0]; ++i) {
            for (std::size_t j = 0; j < n[1]; ++j) {
                for (std::size_t k = 0; k < n[2]; ++k) {
                    for (std::size_t l = 0; l < n[3]; ++l) {
                        table[c++] += ms.weight * pa[i] * pap[j] * pb[k] * pbp[l];
                    }
                }
            }
        }
    }
    return Jpd(q, std::move(table));
}

BinaryJpdBatch::BinaryJpdBatch(std::size_t capacity) : capacity_(capacity), cells_(kCells * capacity, 0.0) {}

void BinaryJpdBatch::push_back(const Jpd& p) {
    if (!p.quartet().is_standard_binary()) throw DomainError("BinaryJpdBatch needs a standard binary quartet");
    push_back(std::span<const double, kCells>(p.table().data(), kCells));
}

void BinaryJpdBatch::push_back(std::span<const double, kCells> cells) {
    if (size_ == capacity_) throw DomainError("BinaryJpdBatch is full");
    for (std::size_t c = 0; c < kCells; ++c) cells_[c * capacity_ + size_] = cells[c];
    ++size_;
}

std::vector<ProofChain> evaluate_proof_chain(const BinaryJpdBatch& batch) {
    const std::size_t stride = batch.capacity();
    std::vector<double> out(simd::kProofChainOutputs * stride, 0.0);
    simd::binary_proof_chain(batch.cells(), batch.size(), stride, out);
    std::vector<ProofChain> result;
    result.reserve(batch.size());
    for (std::size_t t = 0; t < batch.size(); ++t) {
        ProofChain pc;
        std::array<double, 4> e{};
        for (std::size_t k = 0; k < 4; ++k) {
            e[k] = std::clamp(out[k * stride + t], -1.0, 1.0);
            pc.lists[k] = out[(4 + k) * stride + t];
            pc.averaged_bounds[k] = out[(8 + k) * stride + t];
        }
        pc.correlations = CorrelationSet(e);
        result.push_back(pc);
    }
    return result;
}

std::string_view to_string(FeasibilityStatus s) {
    return s == FeasibilityStatus::feasible ? "feasible" : "infeasible";
}

}  // namespace bellab
