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

#include "bellab/hvmodel.hpp"

#include <numeric>

#include "bellab/errors.hpp"
#include "bellab/oracle.hpp"
#include "bellab/random_models.hpp"
#include "gtest/gtest.h"

using namespace bellab;

namespace {

std::array<std::vector<double>, 4> uniform_tables() {
    return {std::vector<double>(4, 0.25), std::vector<double>(4, 0.25), std::vector<double>(4, 0.25),
            std::vector<double>(4, 0.25)};
}

}  // namespace

TEST(ConditionalBehaviour, Validation) {
    const ObservableQuartet q;
    auto t = uniform_tables();
    EXPECT_NO_THROW(ConditionalBehaviour(q, t));
    t[1] = {0.5, 0.5, 0.5, -0.5};
    EXPECT_THROW(ConditionalBehaviour(q, t), InvalidDistribution);
    t[1] = {0.5, 0.5, 0.1, 0.0};
    EXPECT_THROW(ConditionalBehaviour(q, t), InvalidDistribution);
    t[1] = {1.0};
    EXPECT_THROW(ConditionalBehaviour(q, t), InvalidDistribution);
}

TEST(ConditionalBehaviour, Marginals) {
    const auto b = pr_box();
    EXPECT_EQ(b.a_marginal(SettingPair::ApBp), (std::vector<double>{0.5, 0.5}));
    EXPECT_EQ(b(SettingPair::ApBp, 0, 1), 0.5);
    EXPECT_EQ(b(SettingPair::AB, 0, 1), 0.0);
}

TEST(LocalResponse, BehaviourIsProduct) {
    const ObservableQuartet q;
    const LocalResponse r(q, {std::vector<double>{0.2, 0.8}, {0.6, 0.4}, {0.1, 0.9}, {0.5, 0.5}});
    const auto b = r.behaviour(q);
    EXPECT_DOUBLE_EQ(b(SettingPair::AB, 0, 0), 0.2 * 0.1);
    EXPECT_DOUBLE_EQ(b(SettingPair::ApBp, 1, 0), 0.4 * 0.5);
    EXPECT_THROW(LocalResponse(q, {std::vector<double>{1.0}, {0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}}),
                 InvalidDistribution);
}

TEST(LocalResponse, Deterministic) {
    const ObservableQuartet q;
    const auto r = LocalResponse::deterministic(q, {0, 1, 1, 0});
    EXPECT_EQ(r.distribution(Observable::Ap), (std::vector<double>{0, 1}));
    EXPECT_EQ(correlations_of_behaviour(r.behaviour(q), q), CorrelationSet(-1, 1, 1, -1));
}

TEST(FiniteMicrostateModel, WeightsMustNormalise) {
    const ObservableQuartet q;
    const ConditionalBehaviour b(q, uniform_tables());
    EXPECT_THROW(FiniteMicrostateModel(q, {Microstate{0.5, b, std::nullopt}}), InvalidDistribution);
    EXPECT_THROW(FiniteMicrostateModel(q, {Microstate{1.5, b, std::nullopt}, Microstate{-0.5, b, std::nullopt}}),
                 InvalidDistribution);
    const auto m = FiniteMicrostateModel::single(q, b);
    EXPECT_EQ(m.size(), 1u);
    EXPECT_FALSE(m.has_local_decomposition());
}

TEST(FiniteMicrostateModel, MixtureBehaviour) {
    const ObservableQuartet q;
    const auto m = deterministic_strategies_model();
    EXPECT_TRUE(m.has_local_decomposition());
    const auto b = behaviour_of_model(m);
    for (SettingPair p : kSettingPairs) {
        for (double x : b.table(p)) EXPECT_NEAR(x, 0.25, 1e-15);
    }
}

TEST(DetectionPolicy, ConstructionAndScaling) {
    const auto d = DetectionPolicy::constant(3, 0.5);
    EXPECT_EQ(d.microstate_count(), 3u);
    EXPECT_EQ(d.eta(Side::B, Variant::primed, 2), 0.5);
    EXPECT_FALSE(d.is_perfect());
    EXPECT_TRUE(DetectionPolicy::perfect(2).is_perfect());
    EXPECT_EQ(d.scaled(2.0).eta(Observable::A, 0), 1.0);
    EXPECT_THROW(d.scaled(3.0), DomainError);
    EXPECT_THROW(DetectionPolicy({std::vector<double>{1.2}, {1}, {1}, {1}}), DomainError);
    EXPECT_THROW(DetectionPolicy({std::vector<double>{1, 1}, {1}, {1}, {1}}), DomainError);
}

TEST(SettingPolicy, Rows) {
    const auto s = SettingPolicy::independent(2, {0.1, 0.2, 0.3, 0.4});
    EXPECT_EQ(s.probabilities(1)[3], 0.4);
    EXPECT_EQ(SettingPolicy::uniform(4).probabilities(3)[0], 0.25);
    EXPECT_THROW(SettingPolicy({{0.5, 0.5, 0.5, 0.5}}), InvalidDistribution);
}

TEST(MemoryRule, MemorylessReturnsRho) {
    Rng rng(5);
    const auto m = random_local_model(rng, 6);
    const History h;
    EXPECT_EQ(MemoryRule::memoryless().next_distribution(h, m, SettingPolicy::uniform(6)), m.weights());
}

TEST(MemoryRule, AdaptiveMixesRhoWithOnePoint) {
    const auto m = deterministic_strategies_model();
    const auto rule = MemoryRule::adaptive(0.5);
    EXPECT_EQ(rule.kind(), MemoryKind::adaptive);
    EXPECT_THROW(MemoryRule::adaptive(1.5), DomainError);

    std::vector<RoundRecord> records{{0, 3, SettingPair::AB, 0, 0, true, true}};
    History h;
    h.records = records;
    h.pairs[0] = {1, 1, 1.0};
    const auto d = rule.next_distribution(h, m, SettingPolicy::uniform(16));
    ASSERT_EQ(d.size(), 16u);
    EXPECT_NEAR(std::accumulate(d.begin(), d.end(), 0.0), 1.0, 1e-12);
    const auto peak = *std::max_element(d.begin(), d.end());
    EXPECT_NEAR(peak, 0.5 + 0.5 / 16, 1e-12);
}
