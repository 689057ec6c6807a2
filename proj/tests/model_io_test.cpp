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

#include "bellab/model_io.hpp"

#include <cmath>
#include <fstream>

#include "bellab/diagnostics.hpp"
#include "bellab/errors.hpp"
#include "gtest/gtest.h"

using namespace bellab;

namespace {

constexpr const char* kValid = R"({
  "quartet": [[1, -1], [1, -1], [1, -1], [1, -1]],
  "microstates": [
    {"weight": 0.25, "local_response": {"A": [1, 0], "Ap": [0.5, 0.5], "B": [0, 1], "Bp": [1, 0]}},
    {"weight": 0.75,
     "behaviour": {"AB": [[0.5, 0], [0, 0.5]], "ABp": [[0.5, 0], [0, 0.5]],
                   "ApB": [[0.5, 0], [0, 0.5]], "ApBp": [[0, 0.5], [0.5, 0]]}}
  ],
  "detection": {"A": [1, 0.5], "Bp": 0.9},
  "setting_policy": {"AB": 0.1, "ABp": 0.2, "ApB": 0.3, "ApBp": [0.4, 0.4]},
  "memory": {"rule": "adaptive", "strength": 0.25}
}
)";

std::size_t error_line(const std::string& text) {
    try {
        parse_model(text, "m.json");
    } catch (const ModelFileError& e) {
        EXPECT_EQ(e.origin(), "m.json");
        return e.line();
    }
    ADD_FAILURE() << "no error";
    return 0;
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
    const auto pos = s.find(from);
    EXPECT_NE(pos, std::string::npos) << from;
    return s.replace(pos, from.size(), to);
}

}  // namespace

TEST(ModelFile, ParsesEveryField) {
    const auto b = parse_model(kValid);
    EXPECT_EQ(b.model.size(), 2u);
    EXPECT_TRUE(b.model.microstates()[0].local.has_value());
    EXPECT_FALSE(b.model.microstates()[1].local.has_value());
    EXPECT_EQ(b.detection.eta(Observable::A, 1), 0.5);
    EXPECT_EQ(b.detection.eta(Observable::Bp, 0), 0.9);
    EXPECT_EQ(b.detection.eta(Observable::B, 0), 1.0);
    EXPECT_EQ(b.settings.probabilities(1)[2], 0.3);
    EXPECT_EQ(b.memory.kind(), MemoryKind::adaptive);
    EXPECT_EQ(b.memory.strength(), 0.25);
    EXPECT_EQ(check_outcome_independence(b.model).value, 0.5);
}

TEST(ModelFile, MinimalFileGetsDefaults) {
    const auto b = parse_model(R"({"microstates": [{"weight": 1, "local_response":
        {"A": [1, 0], "Ap": [1, 0], "B": [1, 0], "Bp": [1, 0]}}]})");
    EXPECT_TRUE(b.detection.is_perfect());
    EXPECT_TRUE(b.memory.is_memoryless());
    EXPECT_TRUE(b.model.quartet().is_standard_binary());
}

TEST(ModelFile, ErrorsCarryLines) {
    EXPECT_EQ(error_line(replace(kValid, "\"weight\": 0.75", "\"weight\": \"heavy\"")), 5u);
    EXPECT_EQ(error_line(replace(kValid, "[[0, 0.5], [0.5, 0]]", "[[0, 0.5], [0.5, 0.1]]")), 7u);
    EXPECT_EQ(error_line(replace(kValid, "\"ABp\": [[0.5, 0], [0, 0.5]]", "\"ABp\": [[1.5, 0], [0, -0.5]]")), 6u);
    EXPECT_EQ(error_line(replace(kValid, "\"Bp\": 0.9", "\"Bp\": 1.9")), 9u);
    EXPECT_EQ(error_line(replace(kValid, "\"rule\": \"adaptive\"", "\"rule\": \"psychic\"")), 11u);
    EXPECT_EQ(error_line(replace(kValid, "\"strength\": 0.25", "\"strength\": 2")), 11u);
    EXPECT_EQ(error_line(replace(kValid, "\"ApBp\": [0.4, 0.4]", "\"ApBp\": [0.4]")), 10u);
    EXPECT_EQ(error_line(replace(kValid, "\"quartet\"", "\"quartets\"")), 2u);
    EXPECT_EQ(error_line(replace(kValid, "\"B\": [0, 1],", "\"B\": [0, 1]")), 4u);
    EXPECT_EQ(error_line(replace(kValid, "\"A\": [1, 0], \"Ap\"", "\"A\": [1, 0, 0], \"Ap\"")), 4u);
}

TEST(ModelFile, WeightsMustNormalise) {
    EXPECT_THROW(parse_model(replace(kValid, "\"weight\": 0.75", "\"weight\": 0.7")), ModelFileError);
}

TEST(ModelFile, BehaviourNeedsOneForm) {
    const std::string both = R"({"microstates": [{"weight": 1}]})";
    EXPECT_EQ(error_line(both), 1u);
}

TEST(ModelFile, LoadsFromDisk) {
    const std::string path = ::testing::TempDir() + "/bellab_model.json";
    std::ofstream(path) << kValid;
    EXPECT_EQ(load_model(path).source, path);
    EXPECT_THROW(load_model(path + ".missing"), ModelFileError);
}

TEST(Builtins, Names) {
    EXPECT_EQ(load_model("builtin:prbox").model.size(), 1u);
    EXPECT_EQ(load_model("builtin:detection-loophole").model.size(), 8u);
    EXPECT_EQ(load_model("builtin:strategies").model.size(), 16u);
    EXPECT_EQ(load_model("builtin:adaptive-memory?strength=0.5").memory.strength(), 0.5);
    EXPECT_EQ(load_model("builtin:random-local?seed=3&microstates=5").model.size(), 5u);
    EXPECT_THROW(load_model("builtin:nothing"), ModelFileError);
    EXPECT_THROW(load_model("builtin:prbox?x=1"), ModelFileError);
    EXPECT_THROW(load_model("builtin:singlet?angles=1,2,3"), ModelFileError);
    EXPECT_THROW(load_model("builtin:adaptive-memory?strength=abc"), ModelFileError);
}

TEST(Builtins, SingletAngles) {
    const auto b = load_model("builtin:singlet?angles=0,90,45,135");
    const auto c = correlations_of_behaviour(behaviour_of_model(b.model), b.model.quartet());
    EXPECT_NEAR(max_chsh(c), 2 * std::sqrt(2.0), 1e-12);
    const auto flat = load_model("builtin:singlet?angles=0,0,0,0");
    EXPECT_NEAR(max_chsh(correlations_of_behaviour(behaviour_of_model(flat.model), flat.model.quartet())), 2.0,
                1e-12);
}
