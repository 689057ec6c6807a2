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

// JSON documents for run results, assumption reports and feasibility answers.
// Output is deterministic: fixed key order, shortest round-trip numbers, and
// nothing that depends on the thread count or the clock.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bellab/diagnostics.hpp"
#include "bellab/jpd.hpp"
#include "bellab/simulator.hpp"

namespace bellab {

inline constexpr const char* kRunResultSchema = "bellab.run_result/1";
inline constexpr const char* kAssumptionReportSchema = "bellab.assumption_report/1";
inline constexpr const char* kFeasibilitySchema = "bellab.feasibility/1";

/// `blocks` is written when non-empty (memory runs with a block size).
std::string run_result_json(const RunResult& r, const ObservableQuartet& q, const std::string& model_source,
                            std::span<const BlockEstimate> blocks = {});

/// Problems found in a RunResult document; empty when it is valid. Besides
/// field types this recomputes every estimate from the stored tallies.
std::vector<std::string> validate_run_result_json(const std::string& text);

std::string assumption_report_json(const AssumptionReport& report, const std::string& model_source);

/// `with_singles` is the answer for the same correlations constrained by the
/// single means as well.
std::string feasibility_json(const CorrelationSet& c, const FeasibilityResult& correlations_only,
                             const std::optional<std::array<double, 4>>& singles = std::nullopt,
                             const std::optional<FeasibilityResult>& with_singles = std::nullopt);

}  // namespace bellab
