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

// Foundational types of a two-party, two-setting correlation experiment and
// the CHSH arithmetic over them.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace bellab {

/// Absolute tolerance for analytic comparisons. Every quantity is O(1).
inline constexpr double kTolerance = 1e-9;

enum class Side : std::uint8_t { A, B };
enum class Variant : std::uint8_t { base, primed };

struct SettingChoice {
    Side side;
    Variant variant;

    friend constexpr bool operator==(SettingChoice, SettingChoice) = default;
};

/// The four jointly measurable setting pairs. The numeric value doubles as the
/// index into every four-element per-pair array in the library.
enum class SettingPair : std::uint8_t { AB = 0, ABp = 1, ApB = 2, ApBp = 3 };

inline constexpr std::array<SettingPair, 4> kSettingPairs = {SettingPair::AB, SettingPair::ABp,
                                                             SettingPair::ApB, SettingPair::ApBp};

constexpr std::size_t index(SettingPair p) { return static_cast<std::size_t>(p); }

constexpr Variant a_variant(SettingPair p) { return index(p) >= 2 ? Variant::primed : Variant::base; }
constexpr Variant b_variant(SettingPair p) { return index(p) % 2 == 1 ? Variant::primed : Variant::base; }

constexpr SettingPair make_setting_pair(Variant a, Variant b) {
    return static_cast<SettingPair>((a == Variant::primed ? 2 : 0) + (b == Variant::primed ? 1 : 0));
}

/// "AB", "AB'", "A'B", "A'B'".
std::string_view to_string(SettingPair p);

/// The four observables, in table order A, A', B, B'.
enum class Observable : std::uint8_t { A = 0, Ap = 1, B = 2, Bp = 3 };

constexpr std::size_t index(Observable o) { return static_cast<std::size_t>(o); }

constexpr Observable observable(Side side, Variant v) {
    const std::size_t base = side == Side::A ? 0 : 2;
    return static_cast<Observable>(base + (v == Variant::primed ? 1 : 0));
}

/// "A", "A'", "B", "B'".
std::string_view to_string(Observable o);

/// Outcome value lists for A, A', B, B'. Each list is non-empty, has distinct
/// entries, and every entry lies in [-1, 1].
class ObservableQuartet {
  public:
    /// The binary quartet: every observable takes values (+1, -1) in that order.
    ObservableQuartet();

    /// Throws DomainError if a list is empty, repeats a value, or leaves [-1, 1].
    ObservableQuartet(std::vector<double> a, std::vector<double> a_primed, std::vector<double> b,
                      std::vector<double> b_primed);

    const std::vector<double>& outcomes(Observable o) const { return lists_[index(o)]; }
    const std::vector<double>& outcomes(Side s, Variant v) const { return outcomes(observable(s, v)); }
    std::size_t size(Observable o) const { return lists_[index(o)].size(); }

    /// Rows and columns of the outcome-pair table for a setting pair.
    std::size_t rows(SettingPair p) const { return size(observable(Side::A, a_variant(p))); }
    std::size_t cols(SettingPair p) const { return size(observable(Side::B, b_variant(p))); }

    /// Number of cells of a joint table over all four observables.
    std::size_t joint_size() const;

    /// True when every list is exactly (+1, -1).
    bool is_standard_binary() const;

    friend bool operator==(const ObservableQuartet&, const ObservableQuartet&) = default;

  private:
    std::array<std::vector<double>, 4> lists_;
};

/// The four expectation values <AB>, <AB'>, <A'B>, <A'B'>.
class CorrelationSet {
  public:
    constexpr CorrelationSet() = default;

    /// Throws DomainError when an entry is not finite or exceeds 1 in magnitude
    /// by more than 1e-12.
    CorrelationSet(double ab, double abp, double apb, double apbp);
    explicit CorrelationSet(const std::array<double, 4>& values)
        : CorrelationSet(values[0], values[1], values[2], values[3]) {}

    double operator[](SettingPair p) const { return values_[index(p)]; }
    const std::array<double, 4>& values() const { return values_; }

    friend bool operator==(const CorrelationSet&, const CorrelationSet&) = default;

  private:
    std::array<double, 4> values_{};
};

struct SampleStats {
    double mean = 0.0;
    double dispersion = 0.0;  // population standard deviation
    std::size_t count = 0;
};

SampleStats sample_stats(std::span<const double> values);

/// Pearson product-moment correlation. Throws DomainError for fewer than two
/// pairs and ZeroDispersion when either coordinate is constant.
double pearson_correlation(std::span<const std::pair<double, double>> pairs);

/// CHSH list values, one per observable list, in the order
/// (A,B',A',B), (A,B,A',B'), (A',B',A,B), (A',B,A,B').
using ChshValues = std::array<double, 4>;

/// Coefficient of each correlation in list `list`. List i carries the minus
/// sign on setting pair i.
constexpr std::array<double, 4> chsh_coefficients(std::size_t list) {
    std::array<double, 4> c{1.0, 1.0, 1.0, 1.0};
    c[list] = -1.0;
    return c;
}

/// "(A,B',A',B)" etc.
std::string_view chsh_list_name(std::size_t list);

/// Signed sum of list `list` before the absolute value is taken.
double chsh_signed_sum(const CorrelationSet& c, std::size_t list);

ChshValues chsh_list_values(const CorrelationSet& c);
double max_chsh(const CorrelationSet& c);

/// |a(b' - b) + a'(b' + b)|. Throws DomainError if any argument exceeds 1 in
/// magnitude.
double bound_lemma(double a, double a_primed, double b, double b_primed);

}  // namespace bellab
