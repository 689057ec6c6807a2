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

// Joint probability distributions over all four observables at once.

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bellab/core.hpp"
#include "bellab/hvmodel.hpp"

namespace bellab {

/// p(a_i, a'_j, b_k, b'_l), flat with l fastest.
class Jpd {
  public:
    /// Shape-checked only; use validate_jpd for the probability axioms.
    Jpd(ObservableQuartet quartet, std::vector<double> table);

    static Jpd uniform(ObservableQuartet quartet);
    static Jpd point_mass(ObservableQuartet quartet, std::size_t i, std::size_t j, std::size_t k, std::size_t l);

    const ObservableQuartet& quartet() const { return quartet_; }
    std::span<const double> table() const { return table_; }

    std::size_t flat_index(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
        return ((i * n_[1] + j) * n_[2] + k) * n_[3] + l;
    }
    double operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
        return table_[flat_index(i, j, k, l)];
    }
    double& at(std::size_t i, std::size_t j, std::size_t k, std::size_t l) { return table_[flat_index(i, j, k, l)]; }

  private:
    ObservableQuartet quartet_;
    std::array<std::size_t, 4> n_{};
    std::vector<double> table_;
};

/// Throws InvalidJpd naming the first negative entry or the bad total.
void validate_jpd(const Jpd& p);

CorrelationSet correlations_from_jpd(const Jpd& p);

/// Marginal means <A>, <A'>, <B>, <B'>.
std::array<double, 4> single_means_from_jpd(const Jpd& p);

/// CHSH list values of a valid JPD. Throws InvalidJpd for an invalid table and
/// TheoremViolation if a value exceeds 2 + 1e-9.
ChshValues bell_verify(const Jpd& p);

/// p(i,j,k,l) = sum_l rho(l) p(a_i|l) p(a'_j|l) p(b_k|l) p(b'_l|l). Throws
/// NotLocal when a microstate has no local response.
Jpd jpd_from_local_model(const FiniteMicrostateModel& m);

/// Standard-binary JPDs stored column-wise for the batched kernel: cell `c` of
/// table `t` lives at `cells[c * capacity + t]`.
class BinaryJpdBatch {
  public:
    static constexpr std::size_t kCells = 16;

    explicit BinaryJpdBatch(std::size_t capacity);

    /// Throws DomainError if the quartet is not standard binary or the batch is full.
    void push_back(const Jpd& p);
    void push_back(std::span<const double, kCells> cells);

    std::size_t size() const { return size_; }
    std::size_t capacity() const { return capacity_; }
    std::span<const double> cells() const { return cells_; }

  private:
    std::size_t capacity_;
    std::size_t size_ = 0;
    std::vector<double> cells_;
};

/// Per-table proof-chain quantities from the batched kernel.
struct ProofChain {
    CorrelationSet correlations;
    ChshValues lists{};
    /// sum p |a(b'-b) + a'(b'+b)| for each list's variable assignment; bounds
    /// the matching list value from above and is itself at most 2.
    std::array<double, 4> averaged_bounds{};
};

/// Evaluate every table of the batch with the runtime-selected kernel.
std::vector<ProofChain> evaluate_proof_chain(const BinaryJpdBatch& batch);

enum class FeasibilityStatus { feasible, infeasible };

/// Names the violated combination for an infeasible query.
struct InfeasibilityCertificate {
    /// Worst CHSH list, or -1 when every list is within bounds (infeasibility
    /// then comes from the singles or from non-binary outcome sets).
    int list_index = -1;
    /// Sign of the list's signed sum (+1 or -1).
    int sign = 1;
    /// List value minus 2.
    double slack = 0.0;
    /// Farkas multipliers y, one per equality row, with y.A <= 0 column-wise
    /// and y.b > 0. Row order: sum, AB, AB', A'B, A'B', then A, A', B, B' when
    /// singles were given.
    std::vector<double> farkas;
};

struct FeasibilityResult {
    FeasibilityStatus status = FeasibilityStatus::infeasible;
    std::optional<Jpd> witness;
    std::optional<InfeasibilityCertificate> certificate;
    /// Minimum weighted L1 residual of the equality system.
    double residual = 0.0;
    /// The decision came from the exact rational re-solve.
    bool exact = false;
};

/// Decide whether a JPD over `quartet` reproduces the correlations (and the
/// single means when given). Throws DomainError on out-of-range input and
/// NumericalFailure if neither arithmetic reaches a decision.
FeasibilityResult lp_feasible_jpd(const CorrelationSet& c, const std::optional<std::array<double, 4>>& singles,
                                  const ObservableQuartet& quartet = ObservableQuartet{});

std::string_view to_string(FeasibilityStatus s);

}  // namespace bellab
