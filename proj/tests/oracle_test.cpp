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
#include <random>

#include "bellab/diagnostics.hpp"
#include "bellab/jpd.hpp"
#include "gtest/gtest.h"
#include "support/statevector.hpp"

using namespace bellab;

TEST(Singlet, TablesMatchStateVector) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 2 * std::numbers::pi);
    for (int t = 0; t < 200; ++t) {
        const AnalyzerAngles ang{u(rng), u(rng), u(rng), u(rng)};
        const auto b = singlet_behaviour(ang);
        for (SettingPair p : kSettingPairs) {
            const double tx = a_variant(p) == Variant::base ? ang.a : ang.a_primed;
            const double ty = b_variant(p) == Variant::base ? ang.b : ang.b_primed;
            for (std::size_t a = 0; a < 2; ++a) {
                for (std::size_t bb = 0; bb < 2; ++bb) {
                    const double expect = ref::singlet_probability(tx, a == 0 ? 1 : -1, ty, bb == 0 ? 1 : -1);
                    EXPECT_NEAR(b(p, a, bb), expect, 1e-14);
                }
            }
        }
    }
}

TEST(Singlet, StandardAnglesReachTsirelson) {
    const auto ang = AnalyzerAngles::standard();
    const ObservableQuartet q;
    const auto c = correlations_of_behaviour(singlet_behaviour(ang), q);
    EXPECT_NEAR(max_chsh(c), 2 * std::numbers::sqrt2, 1e-12);
    EXPECT_NEAR(c[SettingPair::AB], ref::singlet_correlation(ang.a, ang.b), 1e-15);
    const auto d = AnalyzerAngles::degrees(0, 90, 45, 135);
    EXPECT_NEAR(d.b_primed, ang.b_primed, 1e-15);
}

TEST(PrBox, CorrelationsAndValue) {
    const ObservableQuartet q;
    const auto c = correlations_of_behaviour(pr_box(), q);
    EXPECT_EQ(c, CorrelationSet(1, 1, 1, -1));
    EXPECT_EQ(max_chsh(c), 4.0);
}

TEST(LoopholeFixture, IsLocalWithUnfairDetection) {
    const auto f = detection_loophole_fixture();
    EXPECT_TRUE(f.model.has_local_decomposition());
    EXPECT_EQ(check_factorability(f.model).value, 0.0);
    EXPECT_EQ(check_fair_detection(f.detection).value, 1.0);
    EXPECT_LE(max_chsh(correlations_from_jpd(jpd_from_local_model(f.model))), 2.0);
}

TEST(Strategies, SixteenUniform) {
    const auto m = deterministic_strategies_model();
    EXPECT_EQ(m.size(), 16u);
    for (double w : m.weights()) EXPECT_EQ(w, 1.0 / 16);
}
