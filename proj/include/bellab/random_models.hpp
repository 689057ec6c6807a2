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

// Random generators for property suites and the random-local builtin.
// Distributions are drawn as independent uniform(0,1) entries, normalized.

#pragma once

#include <random>

#include "bellab/hvmodel.hpp"
#include "bellab/jpd.hpp"

namespace bellab {

using Rng = std::mt19937_64;

std::vector<double> random_distribution(Rng& rng, std::size_t n);

Jpd random_jpd(Rng& rng, const ObservableQuartet& q = ObservableQuartet{});

LocalResponse random_local_response(Rng& rng, const ObservableQuartet& q);

/// Arbitrary per-pair tables: generally signalling and non-factorable.
ConditionalBehaviour random_behaviour(Rng& rng, const ObservableQuartet& q);

/// Mixture of `microstates` random local responses with random weights.
FiniteMicrostateModel random_local_model(Rng& rng, std::size_t microstates,
                                         const ObservableQuartet& q = ObservableQuartet{});

/// Binary-quartet model whose microstates are drawn from a mix of kinds:
/// local responses, arbitrary tables, noisy PR boxes, singlets at random
/// angles and parameter-dependent deterministic responses. Covers every cell
/// of the locality lattice.
FiniteMicrostateModel random_mixed_model(Rng& rng, std::size_t microstates);

}  // namespace bellab
