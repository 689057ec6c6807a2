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

#include "bellab/random_models.hpp"

#include <numbers>

#include "bellab/oracle.hpp"

namespace bellab {

std::vector<double> random_distribution(Rng& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> d(n);
    double sum = 0.0;
    for (double& v : d) {
        v = u(rng);
        sum += v;
    }
    for (double& v : d) v /= sum;
    return d;
}

Jpd random_jpd(Rng& rng, const ObservableQuartet& q) { return Jpd(q, random_distribution(rng, q.joint_size())); }

LocalResponse random_local_response(Rng& rng, const ObservableQuartet& q) {
    std::array<std::vector<double>, 4> d;
    for (std::size_t o = 0; o < 4; ++o) d[o] = random_distribution(rng, q.size(static_cast<Observable>(o)));
    return LocalResponse(q, std::move(d));
}

ConditionalBehaviour random_behaviour(Rng& rng, const ObservableQuartet& q) {
    std::array<std::vector<double>, 4> t;
    for (SettingPair p : kSettingPairs) t[index(p)] = random_distribution(rng, q.rows(p) * q.cols(p));
    return ConditionalBehaviour(q, std::move(t));
}

FiniteMicrostateModel random_local_model(Rng& rng, std::size_t microstates, const ObservableQuartet& q) {
    std::vector<LocalResponse> responses;
    responses.reserve(microstates);
    for (std::size_t i = 0; i < microstates; ++i) responses.push_back(random_local_response(rng, q));
    const auto weights = random_distribution(rng, microstates);
    return make_local_model(q, responses, weights);
}

namespace {

ConditionalBehaviour noisy_pr_box(Rng& rng) {
    // v * PR + (1 - v) * uniform keeps uniform marginals: NS and PI hold, OI fails.
    const double v = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const ConditionalBehaviour pr = pr_box();
    const ObservableQuartet q;
    std::array<std::vector<double>, 4> t;
    for (SettingPair p : kSettingPairs) {
        for (double x : pr.table(p)) t[index(p)].push_back(v * x + (1.0 - v) * 0.25);
    }
    return ConditionalBehaviour(q, std::move(t));
}

// B's outcome follows A's setting: violates PI at the microstate level.
ConditionalBehaviour setting_copier(Rng& rng) {
    const ObservableQuartet q;
    const std::size_t a_out = std::uniform_int_distribution<std::size_t>(0, 1)(rng);
    std::array<std::vector<double>, 4> t;
    for (SettingPair p : kSettingPairs) {
        const std::size_t b_out = a_variant(p) == Variant::primed ? 0 : 1;
        std::vector<double> table(4, 0.0);
        table[a_out * 2 + b_out] = 1.0;
        t[index(p)] = std::move(table);
    }
    return ConditionalBehaviour(q, std::move(t));
}

}  // namespace

FiniteMicrostateModel random_mixed_model(Rng& rng, std::size_t microstates) {
    const ObservableQuartet q;
    std::uniform_int_distribution<int> kind(0, 4);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    const auto weights = random_distribution(rng, microstates);
    std::vector<Microstate> ms;
    ms.reserve(microstates);
    for (std::size_t i = 0; i < microstates; ++i) {
        switch (kind(rng)) {
            case 0: {
                LocalResponse r = random_local_response(rng, q);
                ms.push_back(Microstate{weights[i], r.behaviour(q), std::move(r)});
                break;
            }
            case 1: ms.push_back(Microstate{weights[i], random_behaviour(rng, q), std::nullopt}); break;
            case 2: ms.push_back(Microstate{weights[i], noisy_pr_box(rng), std::nullopt}); break;
            case 3: {
                const AnalyzerAngles a{angle(rng), angle(rng), angle(rng), angle(rng)};
                ms.push_back(Microstate{weights[i], singlet_behaviour(a), std::nullopt});
                break;
            }
            default: ms.push_back(Microstate{weights[i], setting_copier(rng), std::nullopt}); break;
        }
    }
    return FiniteMicrostateModel(q, std::move(ms));
}

}  // namespace bellab
