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

#include <cmath>
#include <vector>

#include "bellab/errors.hpp"
#include "bellab/oracle.hpp"
#include "bellab/random_models.hpp"
#include "gtest/gtest.h"
#include "support/oracles.hpp"

using namespace bellab;

TEST(Jpd, ShapeAndValidation) {
    const ObservableQuartet q;
    EXPECT_THROW(Jpd(q, std::vector<double>(15, 1.0 / 15)), InvalidJpd);
    std::vector<double> t(16, 1.0 / 16);
    t[3] = -0.01;
    EXPECT_THROW(validate_jpd(Jpd(q, t)), InvalidJpd);
    EXPECT_THROW(validate_jpd(Jpd(q, std::vector<double>(16, 0.1))), InvalidJpd);
    EXPECT_NO_THROW(validate_jpd(Jpd::uniform(q)));
}

TEST(Jpd, CorrelationsMatchCellSums) {
    Rng rng(21);
    for (int t = 0; t < 500; ++t) {
        const Jpd p = random_jpd(rng);
        const std::vector<double> cells(p.table().begin(), p.table().end());
        const auto expect = ref::binary_table_correlations(cells);
        const auto got = correlations_from_jpd(p);
        for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(got.values()[i], expect[i], 1e-14);
    }
}

TEST(Jpd, PointMassesSaturateOneList) {
    const ObservableQuartet q;
    for (std::size_t c = 0; c < 16; ++c) {
        const Jpd p = Jpd::point_mass(q, c >> 3 & 1, c >> 2 & 1, c >> 1 & 1, c & 1);
        const auto v = bell_verify(p);
        EXPECT_EQ(*std::max_element(v.begin(), v.end()), 2.0);
    }
}

TEST(Jpd, SingleMeans) {
    const ObservableQuartet q;
    const auto m = single_means_from_jpd(Jpd::point_mass(q, 0, 1, 1, 0));
    EXPECT_EQ(m, (std::array<double, 4>{1, -1, -1, 1}));
}

TEST(BellVerify, RandomTablesRespectBound) {
    Rng rng(8);
    for (int t = 0; t < 5000; ++t) {
        for (double v : bell_verify(random_jpd(rng))) EXPECT_LE(v, 2.0 + 1e-12);
    }
}

TEST(BellVerify, NonBinaryOutcomes) {
    const ObservableQuartet q({1, 0, -1}, {0.5, -0.5}, {1, -1}, {0.25, -1});
    Rng rng(2);
    for (int t = 0; t < 500; ++t) {
        for (double v : bell_verify(random_jpd(rng, q))) EXPECT_LE(v, 2.0 + 1e-12);
    }
}

TEST(BellVerify, RejectsInvalidTable) {
    EXPECT_THROW(bell_verify(Jpd(ObservableQuartet{}, std::vector<double>(16, 0.0))), InvalidJpd);
}

TEST(JpdFromLocalModel, ReproducesBehaviour) {
    Rng rng(4);
    for (int t = 0; t < 200; ++t) {
        const auto m = random_local_model(rng, 1 + t % 7);
        const auto a = correlations_from_jpd(jpd_from_local_model(m));
        const auto b = correlations_of_behaviour(behaviour_of_model(m), m.quartet());
        for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(a.values()[i], b.values()[i], 1e-12);
    }
}

TEST(JpdFromLocalModel, RejectsNonLocal) {
    EXPECT_THROW(jpd_from_local_model(FiniteMicrostateModel::single(ObservableQuartet{}, pr_box())), NotLocal);
}

TEST(ProofChain, BatchMatchesOracle) {
    Rng rng(13);
    const std::size_t n = 37;
    BinaryJpdBatch batch(n);
    std::vector<std::vector<double>> tables;
    for (std::size_t t = 0; t < n; ++t) {
        const Jpd p = random_jpd(rng);
        tables.emplace_back(p.table().begin(), p.table().end());
        batch.push_back(p);
    }
    EXPECT_THROW(batch.push_back(Jpd::uniform(ObservableQuartet{})), DomainError);
    const auto out = evaluate_proof_chain(batch);
    ASSERT_EQ(out.size(), n);
    for (std::size_t t = 0; t < n; ++t) {
        const auto e = ref::binary_table_correlations(tables[t]);
        const auto lists = ref::chsh_by_hand(e);
        const double lemma = ref::binary_table_lemma_bound(tables[t]);
        for (std::size_t i = 0; i < 4; ++i) {
            EXPECT_NEAR(out[t].correlations.values()[i], e[i], 1e-14);
            EXPECT_NEAR(out[t].lists[i], lists[i], 1e-14);
            EXPECT_LE(out[t].lists[i], out[t].averaged_bounds[i] + 1e-14);
            EXPECT_LE(out[t].averaged_bounds[i], 2.0 + 1e-14);
        }
        // The first list is the lemma's own combination.
        EXPECT_NEAR(out[t].averaged_bounds[0], lemma, 1e-14);
    }
}
