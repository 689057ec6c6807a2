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

// Exact assumption checks on explicit finite models. Each check is a sup-norm
// over the enumerated tables; an assumption holds when its deviation is at
// most 1e-9.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "bellab/hvmodel.hpp"

namespace bellab {

struct Deviation {
    double value = 0.0;
    /// Where the maximum is attained, e.g. "lambda=0 settings=(A',B') outcomes=(+1,-1)".
    std::string witness;
};

/// max |p(a,b|x,y,l) - p(a|x,l) p(b|y,l)|. The single-side marginals are
/// averaged over the remote setting, so the deviation vanishes exactly when
/// both parameter and outcome independence hold.
Deviation check_factorability(const FiniteMicrostateModel& m);

/// max |p(a|x,y1,l) - p(a|x,y2,l)|, both sides.
Deviation check_parameter_independence(const FiniteMicrostateModel& m);

/// max |p(a|b,x,y,l) - p(a|x,y,l)|, both sides, skipping conditioning events
/// below 1e-12.
Deviation check_outcome_independence(const FiniteMicrostateModel& m);

/// Parameter independence after averaging over rho.
Deviation check_no_signalling(const FiniteMicrostateModel& m);

/// max over (side, variant) of the spread of efficiency across microstates.
Deviation check_fair_detection(const DetectionPolicy& d);

/// max over setting pairs of the spread of p(x,y|l) across microstates.
Deviation check_no_conspiracy(const SettingPolicy& s);

struct AssumptionRecord {
    std::string name;
    bool holds = true;
    double max_deviation = 0.0;
    std::string worst_witness;
    std::string note;
};

/// Seven checked assumptions, in order: factorability, parameter_independence,
/// outcome_independence, no_signalling, fair_detection, no_conspiracy,
/// memoryless.
struct AssumptionReport {
    std::vector<AssumptionRecord> records;
    /// Properties that hold by construction and are not checked, e.g.
    /// single_valued: every round records exactly one outcome per side.
    std::vector<AssumptionRecord> structural;

    /// Throws std::out_of_range for an unknown name.
    const AssumptionRecord& operator[](std::string_view name) const;
    bool all_hold() const;
};

/// Throws InconsistentReport if factorability holds without PI and OI, or PI
/// holds without no-signalling, and DomainError if a policy does not cover
/// the model's microstates.
AssumptionReport assumption_report(const FiniteMicrostateModel& m, const DetectionPolicy& detection,
                                   const SettingPolicy& settings, const MemoryRule& memory);

}  // namespace bellab
