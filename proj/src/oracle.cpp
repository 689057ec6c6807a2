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

#include "bellab/oracle.hpp"

#include <cmath>
#include <numbers>

namespace bellab {

AnalyzerAngles AnalyzerAngles::degrees(double a, double a_primed, double b, double b_primed) {
    constexpr double k = std::numbers::pi / 180.0;
    return {a * k, a_primed * k, b * k, b_primed * k};
}

ConditionalBehaviour singlet_behaviour(const AnalyzerAngles& angles) {
    const ObservableQuartet q;
    std::array<std::vector<double>, 4> tables;
    for (SettingPair p : kSettingPairs) {
        const double tx = a_variant(p) == Variant::base ? angles.a : angles.a_primed;
        const double ty = b_variant(p) == Variant::base ? angles.b : angles.b_primed;
        const double c = std::cos(tx - ty);
        auto& t = tables[index(p)];
        for (double a : q.outcomes(Side::A, a_variant(p))) {
            for (double b : q.outcomes(Side::B, b_variant(p))) t.push_back((1.0 - a * b * c) / 4.0);
        }
    }
    return ConditionalBehaviour(q, std::move(tables));
}

ConditionalBehaviour pr_box() {
    const ObservableQuartet q;
    std::array<std::vector<double>, 4> tables;
    for (SettingPair p : kSettingPairs) {
        const bool anti = p == SettingPair::ApBp;
        // Rows (+1, -1), columns (+1, -1).
        tables[index(p)] = anti ? std::vector<double>{0.0, 0.5, 0.5, 0.0} : std::vector<double>{0.5, 0.0, 0.0, 0.5};
    }
    return ConditionalBehaviour(q, std::move(tables));
}

LoopholeFixture detection_loophole_fixture() {
    const ObservableQuartet q;
    std::vector<LocalResponse> responses;
    std::array<std::vector<double>, 4> eta;
    for (SettingPair target : kSettingPairs) {
        const bool anti = target == SettingPair::ApBp;
        for (std::size_t a_out : {0u, 1u}) {
            const std::size_t b_out = anti ? 1 - a_out : a_out;
            // Off-target settings answer +1; they are never detected.
            std::array<std::size_t, 4> outcome{0, 0, 0, 0};
            const Observable ao = observable(Side::A, a_variant(target));
            const Observable bo = observable(Side::B, b_variant(target));
            outcome[index(ao)] = a_out;
            outcome[index(bo)] = b_out;
            responses.push_back(LocalResponse::deterministic(q, outcome));
            for (std::size_t o = 0; o < 4; ++o) {
                const auto obs = static_cast<Observable>(o);
                eta[o].push_back(obs == ao || obs == bo ? 1.0 : 0.0);
            }
        }
    }
    const std::vector<double> weights(responses.size(), 1.0 / static_cast<double>(responses.size()));
    return {make_local_model(q, responses, weights), DetectionPolicy(std::move(eta))};
}

FiniteMicrostateModel deterministic_strategies_model() {
    const ObservableQuartet q;
    std::vector<LocalResponse> responses;
    for (std::size_t s = 0; s < 16; ++s) {
        responses.push_back(LocalResponse::deterministic(q, {(s >> 3) & 1, (s >> 2) & 1, (s >> 1) & 1, s & 1}));
    }
    const std::vector<double> weights(16, 1.0 / 16.0);
    return make_local_model(q, responses, weights);
}

}  // namespace bellab
