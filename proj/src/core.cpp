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

#include "bellab/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bellab/errors.hpp"

namespace bellab {

std::string_view to_string(SettingPair p) {
    switch (p) {
        case SettingPair::AB: return "AB";
        case SettingPair::ABp: return "AB'";
        case SettingPair::ApB: return "A'B";
        case SettingPair::ApBp: return "A'B'";
    }
    return "?";
}

std::string_view to_string(Observable o) {
    switch (o) {
        case Observable::A: return "A";
        case Observable::Ap: return "A'";
        case Observable::B: return "B";
        case Observable::Bp: return "B'";
    }
    return "?";
}

namespace {

void check_outcome_list(const std::vector<double>& values, Observable o) {
    const std::string name(to_string(o));
    if (values.empty()) throw DomainError("outcome list for " + name + " is empty");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]) || std::abs(values[i]) > 1.0) {
            throw DomainError("outcome " + std::to_string(values[i]) + " of " + name + " lies outside [-1, 1]");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (values[i] == values[j]) {
                throw DomainError("outcome list for " + name + " repeats " + std::to_string(values[i]));
            }
        }
    }
}

}  // namespace

ObservableQuartet::ObservableQuartet()
    : lists_{std::vector<double>{1.0, -1.0}, std::vector<double>{1.0, -1.0}, std::vector<double>{1.0, -1.0},
             std::vector<double>{1.0, -1.0}} {}

ObservableQuartet::ObservableQuartet(std::vector<double> a, std::vector<double> a_primed, std::vector<double> b,
                                     std::vector<double> b_primed)
    : lists_{std::move(a), std::move(a_primed), std::move(b), std::move(b_primed)} {
    for (std::size_t i = 0; i < 4; ++i) check_outcome_list(lists_[i], static_cast<Observable>(i));
}

std::size_t ObservableQuartet::joint_size() const {
    return lists_[0].size() * lists_[1].size() * lists_[2].size() * lists_[3].size();
}

bool ObservableQuartet::is_standard_binary() const {
    return std::all_of(lists_.begin(), lists_.end(), [](const std::vector<double>& l) {
        return l.size() == 2 && l[0] == 1.0 && l[1] == -1.0;
    });
}

CorrelationSet::CorrelationSet(double ab, double abp, double apb, double apbp) : values_{ab, abp, apb, apbp} {
    for (std::size_t i = 0; i < 4; ++i) {
        if (!std::isfinite(values_[i]) || std::abs(values_[i]) > 1.0 + 1e-12) {
            throw DomainError("correlation <" + std::string(to_string(kSettingPairs[i])) +
                              "> = " + std::to_string(values_[i]) + " lies outside [-1, 1]");
        }
    }
}

SampleStats sample_stats(std::span<const double> values) {
    SampleStats s;
    s.count = values.size();
    if (values.empty()) return s;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (double v : values) {
        sum += v;
        sum_sq += v * v;
    }
    const double n = static_cast<double>(values.size());
    s.mean = sum / n;
    s.dispersion = std::sqrt(std::max(0.0, sum_sq / n - s.mean * s.mean));
    return s;
}

double pearson_correlation(std::span<const std::pair<double, double>> pairs) {
    if (pairs.size() < 2) throw DomainError("pearson_correlation needs at least two pairs");
    const double n = static_cast<double>(pairs.size());
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (const auto& [x, y] : pairs) {
        mean_x += x;
        mean_y += y;
    }
    mean_x /= n;
    mean_y /= n;

    // Centred sums are more accurate than <XY> - <X><Y> for large offsets.
    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    for (const auto& [x, y] : pairs) {
        const double dx = x - mean_x;
        const double dy = y - mean_y;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) throw ZeroDispersion("pearson_correlation: a marginal is constant");
    const double r = sxy / std::sqrt(sxx * syy);
    return std::clamp(r, -1.0, 1.0);
}

std::string_view chsh_list_name(std::size_t list) {
    static constexpr std::array<std::string_view, 4> names = {"(A,B',A',B)", "(A,B,A',B')", "(A',B',A,B)",
                                                               "(A',B,A,B')"};
    return list < names.size() ? names[list] : "?";
}

double chsh_signed_sum(const CorrelationSet& c, std::size_t list) {
    const auto coef = chsh_coefficients(list);
    const auto& e = c.values();
    return coef[0] * e[0] + coef[1] * e[1] + coef[2] * e[2] + coef[3] * e[3];
}

ChshValues chsh_list_values(const CorrelationSet& c) {
    ChshValues out{};
    for (std::size_t i = 0; i < 4; ++i) out[i] = std::abs(chsh_signed_sum(c, i));
    return out;
}

double max_chsh(const CorrelationSet& c) {
    const auto v = chsh_list_values(c);
    return *std::max_element(v.begin(), v.end());
}

double bound_lemma(double a, double a_primed, double b, double b_primed) {
    for (double v : {a, a_primed, b, b_primed}) {
        if (!std::isfinite(v) || std::abs(v) > 1.0) {
            throw DomainError("bound_lemma argument " + std::to_string(v) + " lies outside [-1, 1]");
        }
    }
    return std::abs(a * (b_primed - b) + a_primed * (b_primed + b));
}

}  // namespace bellab
