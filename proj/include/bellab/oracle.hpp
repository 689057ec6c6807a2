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

// Reference behaviours and fixtures on the binary quartet.

#pragma once

#include "bellab/hvmodel.hpp"

namespace bellab {

/// Analyzer directions in radians.
struct AnalyzerAngles {
    double a = 0.0;
    double a_primed = 0.0;
    double b = 0.0;
    double b_primed = 0.0;

    static AnalyzerAngles degrees(double a, double a_primed, double b, double b_primed);
    /// 0, 90, 45, 135 degrees: the maximal-violation configuration.
    static AnalyzerAngles standard() { return degrees(0.0, 90.0, 45.0, 135.0); }
};

/// Spin singlet measured along coplanar directions:
/// p(a, b | x, y) = (1 - a b cos(theta_x - theta_y)) / 4.
ConditionalBehaviour singlet_behaviour(const AnalyzerAngles& angles);

/// Extremal no-signalling box: a = b on (A,B), (A,B'), (A',B) and a = -b on
/// (A',B'), each consistent pair with probability 1/2.
ConditionalBehaviour pr_box();

struct LoopholeFixture {
    FiniteMicrostateModel model;
    DetectionPolicy detection;
};

/// Eight equally weighted local deterministic microstates. Each one targets a
/// setting pair and carries one of the two outcome pairs the PR box allows
/// there; a side fires only when its setting matches the target. Coincidences
/// therefore reproduce PR statistics while the full ensemble stays local.
LoopholeFixture detection_loophole_fixture();

/// The sixteen local deterministic strategies on the binary quartet, equally
/// weighted. Index bits (A, A', B, B') with bit set meaning outcome -1.
FiniteMicrostateModel deterministic_strategies_model();

}  // namespace bellab
