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

// Hidden-variable models over a finite, explicit microstate space, together
// with the detection, setting-choice and memory policies a run is driven by.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "bellab/core.hpp"

namespace bellab {

/// p(a, b | x, y) for each of the four setting pairs. Table for pair p is
/// row-major with rows indexed by the A-side outcome and columns by the B-side
/// outcome. Entries are non-negative and each table sums to 1 within 1e-9.
class ConditionalBehaviour {
  public:
    /// Throws InvalidDistribution if a table has the wrong shape, a negative or
    /// non-finite entry, or does not sum to 1.
    ConditionalBehaviour(const ObservableQuartet& quartet, std::array<std::vector<double>, 4> tables);

    double operator()(SettingPair p, std::size_t a, std::size_t b) const {
        return tables_[index(p)][a * cols(p) + b];
    }
    std::span<const double> table(SettingPair p) const { return tables_[index(p)]; }

    std::size_t rows(SettingPair p) const { return sizes_[index(p) >= 2 ? 1 : 0]; }
    std::size_t cols(SettingPair p) const { return sizes_[index(p) % 2 == 1 ? 3 : 2]; }
    std::size_t size(Observable o) const { return sizes_[index(o)]; }

    /// p(a | x, y): row sums of the pair table.
    std::vector<double> a_marginal(SettingPair p) const;
    /// p(b | x, y): column sums of the pair table.
    std::vector<double> b_marginal(SettingPair p) const;

    /// Same outcome-set sizes as the quartet.
    bool fits(const ObservableQuartet& q) const;

  private:
    std::array<std::size_t, 4> sizes_{};
    std::array<std::vector<double>, 4> tables_;
};

/// Single-observable outcome distributions p(A=a|l), p(A'=a'|l), p(B=b|l),
/// p(B'=b'|l) of one microstate.
class LocalResponse {
  public:
    /// Throws InvalidDistribution on a malformed distribution or a size that
    /// does not match the quartet.
    LocalResponse(const ObservableQuartet& quartet, std::array<std::vector<double>, 4> distributions);

    /// All mass on the outcome with the given index, per observable.
    static LocalResponse deterministic(const ObservableQuartet& quartet, const std::array<std::size_t, 4>& outcome);

    const std::vector<double>& distribution(Observable o) const { return dists_[index(o)]; }

    /// Product p(a|x) p(b|y) for every pair.
    ConditionalBehaviour behaviour(const ObservableQuartet& quartet) const;

  private:
    std::array<std::vector<double>, 4> dists_;
};

struct Microstate {
    double weight = 0.0;
    ConditionalBehaviour behaviour;
    /// Present when the microstate was built from single-observable responses.
    std::optional<LocalResponse> local;
};

/// A weighted finite set of microstates: the discrete rho(lambda) of an ensemble.
class FiniteMicrostateModel {
  public:
    /// Throws InvalidDistribution unless weights are non-negative and sum to 1
    /// within 1e-9, and every behaviour fits the quartet.
    FiniteMicrostateModel(ObservableQuartet quartet, std::vector<Microstate> microstates);

    /// Single microstate with weight 1.
    static FiniteMicrostateModel single(ObservableQuartet quartet, ConditionalBehaviour behaviour);

    const ObservableQuartet& quartet() const { return quartet_; }
    const std::vector<Microstate>& microstates() const { return microstates_; }
    std::size_t size() const { return microstates_.size(); }
    std::vector<double> weights() const;

    /// Every microstate carries a LocalResponse.
    bool has_local_decomposition() const;

  private:
    ObservableQuartet quartet_;
    std::vector<Microstate> microstates_;
};

FiniteMicrostateModel make_local_model(const ObservableQuartet& quartet, std::span<const LocalResponse> responses,
                                       std::span<const double> weights);

/// Mixture over microstates: p(a,b|x,y) = sum_l rho(l) p(a,b|x,y,l).
ConditionalBehaviour behaviour_of_model(const FiniteMicrostateModel& m);

/// <XY> = sum x y p(x, y | pair) for every pair.
CorrelationSet correlations_of_behaviour(const ConditionalBehaviour& b, const ObservableQuartet& q);

/// Detection efficiency per (side, setting variant, microstate). Values lie in [0, 1].
class DetectionPolicy {
  public:
    /// Efficiency 1 everywhere.
    static DetectionPolicy perfect(std::size_t microstates);
    /// The same efficiency for every side, variant and microstate.
    static DetectionPolicy constant(std::size_t microstates, double eta);

    /// `table[observable][microstate]`. Throws DomainError on values outside
    /// [0, 1] or a ragged table.
    explicit DetectionPolicy(std::array<std::vector<double>, 4> table);

    double eta(Side s, Variant v, std::size_t microstate) const {
        return table_[index(observable(s, v))][microstate];
    }
    double eta(Observable o, std::size_t microstate) const { return table_[index(o)][microstate]; }
    std::size_t microstate_count() const { return table_[0].size(); }

    /// Every efficiency multiplied by `factor`. Throws DomainError if a result
    /// would leave [0, 1].
    DetectionPolicy scaled(double factor) const;

    /// Efficiency 1 everywhere.
    bool is_perfect() const;

  private:
    std::array<std::vector<double>, 4> table_;
};

/// p(x, y | microstate) over the four setting pairs.
class SettingPolicy {
  public:
    static SettingPolicy uniform(std::size_t microstates);
    /// The same distribution for every microstate.
    static SettingPolicy independent(std::size_t microstates, const std::array<double, 4>& probabilities);

    /// One distribution per microstate. Throws InvalidDistribution on a
    /// malformed row.
    explicit SettingPolicy(std::vector<std::array<double, 4>> rows);

    const std::array<double, 4>& probabilities(std::size_t microstate) const { return rows_[microstate]; }
    std::size_t microstate_count() const { return rows_.size(); }

  private:
    std::vector<std::array<double, 4>> rows_;
};

/// One simulated measurement round. Exactly one outcome per side.
struct RoundRecord {
    std::uint64_t round = 0;
    std::uint32_t microstate = 0;
    SettingPair pair = SettingPair::AB;
    std::uint16_t a_outcome = 0;  // index into the A-side outcome list
    std::uint16_t b_outcome = 0;
    bool detected_a = true;
    bool detected_b = true;
};

/// Running totals per setting pair over double-detected rounds.
struct PairHistory {
    std::uint64_t rounds = 0;
    std::uint64_t coincidences = 0;
    double product_sum = 0.0;
};

/// Everything a memory rule may look at before round `records.size()`.
struct History {
    std::span<const RoundRecord> records;
    std::array<PairHistory, 4> pairs{};
};

enum class MemoryKind : std::uint8_t { memoryless, adaptive };

/// Picks the microstate distribution for the next round from the history of
/// earlier rounds. A memoryless rule always returns rho.
///
/// The adaptive rule evaluates, for each microstate, the expected change of the
/// cumulative coincidence CHSH estimate on the list that currently leads, and
/// puts `strength` of the mass on the best one (the rest stays on rho).
class MemoryRule {
  public:
    MemoryRule() = default;
    static MemoryRule memoryless() { return MemoryRule{}; }
    /// Throws DomainError unless 0 <= strength <= 1.
    static MemoryRule adaptive(double strength = 1.0);

    MemoryKind kind() const { return kind_; }
    double strength() const { return strength_; }
    bool is_memoryless() const { return kind_ == MemoryKind::memoryless; }

    std::vector<double> next_distribution(const History& history, const FiniteMicrostateModel& model,
                                          const SettingPolicy& settings) const;

  private:
    MemoryKind kind_ = MemoryKind::memoryless;
    double strength_ = 0.0;
};

std::string_view to_string(MemoryKind kind);

}  // namespace bellab
