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

// Monte Carlo measurement runs.
//
// Round r draws its variates from Philox4x32-10 with key = seed and counter =
// (r, block), so a round's record depends only on (model, config, r) and the
// history a memory rule sees. Memoryless runs may therefore be split across
// threads without changing a single bit of the result. Per round:
//
//   1. microstate from rho (or from the memory rule's distribution),
//   2. setting pair from p(x,y | microstate),
//   3. outcome pair from p(a,b | x,y,microstate),
//   4. one detection flag per side from eta(side, own setting, microstate).

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "bellab/hvmodel.hpp"

namespace bellab {

enum class Estimator : std::uint8_t {
    /// Mean product over rounds where both sides fired.
    coincidence_only,
    /// Every round counts; an undetected side contributes the value 0.
    undetected_as_zero,
};

std::string_view to_string(Estimator e);

struct ExperimentConfig {
    std::uint64_t rounds = 1;
    std::uint64_t seed = 0;
    SettingPolicy setting_policy = SettingPolicy::uniform(1);
    DetectionPolicy detection = DetectionPolicy::perfect(1);
    MemoryRule memory;
    Estimator estimator = Estimator::coincidence_only;
    /// Upper bound on worker threads; 0 picks the hardware concurrency.
    unsigned threads = 0;

    /// Uniform settings, perfect detection, no memory, sized for `m`.
    static ExperimentConfig defaults_for(const FiniteMicrostateModel& m, std::uint64_t rounds, std::uint64_t seed);
};

/// Counts of (a, b, detected_a, detected_b) for one setting pair.
class PairTally {
  public:
    PairTally() = default;
    PairTally(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), counts_(rows * cols * 4, 0) {}

    void add(std::size_t a, std::size_t b, bool det_a, bool det_b, std::uint64_t n = 1) {
        counts_[slot(a, b, det_a, det_b)] += n;
    }
    std::uint64_t count(std::size_t a, std::size_t b, bool det_a, bool det_b) const {
        return counts_[slot(a, b, det_a, det_b)];
    }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    std::uint64_t rounds() const;
    std::uint64_t coincidences() const;

    PairTally& operator+=(const PairTally& other);
    friend bool operator==(const PairTally&, const PairTally&) = default;

  private:
    std::size_t slot(std::size_t a, std::size_t b, bool det_a, bool det_b) const {
        return ((a * cols_ + b) * 2 + (det_a ? 1 : 0)) * 2 + (det_b ? 1 : 0);
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::uint64_t> counts_;
};

struct Tallies {
    std::array<PairTally, 4> pairs;

    explicit Tallies(const ObservableQuartet& q);
    Tallies& operator+=(const Tallies& other);
    std::uint64_t rounds() const;
    friend bool operator==(const Tallies&, const Tallies&) = default;
};

struct CorrelationEstimate {
    CorrelationSet values;
    std::array<double, 4> se{};
    /// Events each estimate averages over.
    std::array<std::uint64_t, 4> counts{};
};

struct ChshEstimate {
    ChshValues values{};
    std::array<double, 4> se{};
    double max = 0.0;
    double max_se = 0.0;
    std::size_t argmax = 0;
};

/// Throws NoCoincidences if a pair has no usable events.
CorrelationEstimate estimate_correlations(const Tallies& tallies, const ObservableQuartet& q, Estimator estimator);

/// List values from the estimates, errors added in quadrature.
ChshEstimate chsh_estimate(const CorrelationEstimate& c);

struct RunResult {
    std::uint64_t rounds = 0;
    std::uint64_t seed = 0;
    Estimator estimator = Estimator::coincidence_only;
    /// Forced single-threaded by a memory rule.
    bool sequential = false;
    Tallies tallies;
    CorrelationEstimate correlations;
    ChshEstimate chsh;
};

RunResult run_experiment(const FiniteMicrostateModel& m, const ExperimentConfig& cfg);

/// Records of rounds [first, first + count) of a memoryless run.
std::vector<RoundRecord> simulate_rounds(const FiniteMicrostateModel& m, const ExperimentConfig& cfg,
                                         std::uint64_t first, std::uint64_t count);

struct SweepRow {
    double eta = 0.0;
    double max_chsh = 0.0;
    double se = 0.0;
};

/// One run per grid point with the detection policy scaled by eta and seed
/// derive_seed(cfg.seed, point index).
std::vector<SweepRow> sweep_efficiency(const FiniteMicrostateModel& m, const ExperimentConfig& cfg,
                                       std::span<const double> eta_grid);

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

struct BlockEstimate {
    std::uint64_t end_round = 0;
    double block_max = 0.0;
    double block_se = 0.0;
    double cumulative_max = 0.0;
    double cumulative_se = 0.0;
};

struct MemoryRunResult {
    std::vector<BlockEstimate> blocks;
    RunResult cumulative;
};

/// Sequential run with per-block and cumulative CHSH estimates. Throws
/// DomainError unless block_size divides cfg.rounds.
MemoryRunResult run_memory_model(const MemoryRule& rule, const FiniteMicrostateModel& m, ExperimentConfig cfg,
                                 std::uint64_t block_size);

}  // namespace bellab
