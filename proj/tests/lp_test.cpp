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

#include <cmath>
#include <random>

#include "bellab/errors.hpp"
#include "bellab/jpd.hpp"
#include "bellab/random_models.hpp"
#include "gtest/gtest.h"
#include "support/oracles.hpp"

using namespace bellab;

namespace {

// Columns of the equality system for the 16 deterministic assignments.
std::vector<std::array<double, 9>> vertex_columns() {
    std::vector<std::array<double, 9>> cols;
    for (int c = 0; c < 16; ++c) {
        const double a = (c & 8) ? -1 : 1, ap = (c & 4) ? -1 : 1, b = (c & 2) ? -1 : 1, bp = (c & 1) ? -1 : 1;
        cols.push_back({1, a * b, a * bp, ap * b, ap * bp, a, ap, b, bp});
    }
    return cols;
}

void expect_farkas(const FeasibilityResult& r, const CorrelationSet& c, const std::optional<std::array<double, 4>>& s) {
    ASSERT_TRUE(r.certificate.has_value());
    const auto& y = r.certificate->farkas;
    ASSERT_EQ(y.size(), s ? 9u : 5u);
    std::vector<double> rhs{1, c.values()[0], c.values()[1], c.values()[2], c.values()[3]};
    if (s) rhs.insert(rhs.end(), s->begin(), s->end());
    double yb = 0;
    for (std::size_t i = 0; i < y.size(); ++i) yb += y[i] * rhs[i];
    EXPECT_GT(yb, 0.0);
    for (const auto& col : vertex_columns()) {
        double ya = 0;
        for (std::size_t i = 0; i < y.size(); ++i) ya += y[i] * col[i];
        EXPECT_LE(ya, 1e-9);
    }
}

}  // namespace

TEST(LpFeasibility, PrBoxIsInfeasible) {
    const CorrelationSet c(1, 1, 1, -1);
    const auto r = lp_feasible_jpd(c, std::nullopt);
    EXPECT_EQ(r.status, FeasibilityStatus::infeasible);
    ASSERT_TRUE(r.certificate);
    EXPECT_EQ(r.certificate->list_index, 3);
    EXPECT_NEAR(r.certificate->slack, 2.0, 1e-12);
    expect_farkas(r, c, std::nullopt);
}

TEST(LpFeasibility, SingletIsInfeasible) {
    const double s = std::sqrt(0.5);
    const CorrelationSet c(-s, s, -s, -s);
    const auto r = lp_feasible_jpd(c, std::nullopt);
    EXPECT_EQ(r.status, FeasibilityStatus::infeasible);
    EXPECT_EQ(r.certificate->list_index, 1);
    expect_farkas(r, c, std::nullopt);
}

TEST(LpFeasibility, WitnessReproducesCorrelations) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1, 1);
    int feasible = 0;
    for (int t = 0; t < 300; ++t) {
        const ref::Corr e{u(rng), u(rng), u(rng), u(rng)};
        const CorrelationSet c(e);
        const auto r = lp_feasible_jpd(c, std::nullopt);
        if (r.status != FeasibilityStatus::feasible) {
            expect_farkas(r, c, std::nullopt);
            continue;
        }
        ++feasible;
        ASSERT_TRUE(r.witness);
        EXPECT_NO_THROW(validate_jpd(*r.witness));
        const std::vector<double> cells(r.witness->table().begin(), r.witness->table().end());
        const auto got = ref::binary_table_correlations(cells);
        for (int i = 0; i < 4; ++i) EXPECT_NEAR(got[i], e[i], 1e-9);
    }
    EXPECT_GT(feasible, 100);
}

TEST(LpFeasibility, AgreesWithEightInequalities) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int t = 0; t < 500; ++t) {
        const ref::Corr e{u(rng), u(rng), u(rng), u(rng)};
        const bool expect = ref::eight_inequalities_hold(e, 0.0);
        const auto r = lp_feasible_jpd(CorrelationSet(e), std::nullopt);
        const auto z = lp_feasible_jpd(CorrelationSet(e), std::array<double, 4>{0, 0, 0, 0});
        EXPECT_EQ(r.status == FeasibilityStatus::feasible, expect) << t;
        EXPECT_EQ(z.status == FeasibilityStatus::feasible, expect) << t;
    }
}

TEST(LpFeasibility, BoundaryPointsAreFeasible) {
    // Exactly on a facet and at a vertex.
    EXPECT_EQ(lp_feasible_jpd(CorrelationSet(0.5, 0.5, 0.5, -0.5), std::nullopt).status, FeasibilityStatus::feasible);
    EXPECT_EQ(lp_feasible_jpd(CorrelationSet(1, 1, 1, 1), std::nullopt).status, FeasibilityStatus::feasible);
    EXPECT_EQ(lp_feasible_jpd(CorrelationSet(1, 1, 1, -1 + 1e-6), std::nullopt).status,
              FeasibilityStatus::infeasible);
}

TEST(LpFeasibility, SinglesCanForbidOtherwiseFeasibleData) {
    // Perfect correlation on AB with opposite single means is impossible.
    const CorrelationSet c(1, 0, 0, 0);
    EXPECT_EQ(lp_feasible_jpd(c, std::nullopt).status, FeasibilityStatus::feasible);
    const std::array<double, 4> s{1, 0, -1, 0};
    const auto r = lp_feasible_jpd(c, s);
    EXPECT_EQ(r.status, FeasibilityStatus::infeasible);
    ASSERT_TRUE(r.certificate);
    EXPECT_EQ(r.certificate->list_index, -1);
    expect_farkas(r, c, s);
}

TEST(LpFeasibility, LocalModelDataIsFeasible) {
    Rng rng(6);
    for (int t = 0; t < 100; ++t) {
        const auto m = random_local_model(rng, 4);
        const Jpd p = jpd_from_local_model(m);
        const auto r = lp_feasible_jpd(correlations_from_jpd(p), single_means_from_jpd(p));
        EXPECT_EQ(r.status, FeasibilityStatus::feasible);
    }
}

TEST(LpFeasibility, NonBinaryQuartet) {
    const ObservableQuartet q({1, 0, -1}, {1, -1}, {1, -1}, {1, 0, -1});
    Rng rng(3);
    const Jpd p = random_jpd(rng, q);
    EXPECT_EQ(lp_feasible_jpd(correlations_from_jpd(p), single_means_from_jpd(p), q).status,
              FeasibilityStatus::feasible);
    EXPECT_EQ(lp_feasible_jpd(CorrelationSet(1, 1, 1, 1), std::nullopt, q).status, FeasibilityStatus::feasible);
    EXPECT_EQ(lp_feasible_jpd(CorrelationSet(0.9, 0.9, 0.9, -0.9), std::nullopt, q).status,
              FeasibilityStatus::infeasible);
}
