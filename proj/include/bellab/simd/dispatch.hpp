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

// Runtime instruction-set selection for the data-parallel kernels.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant. Variants are bit-identical to the reference; tests enforce it.
// The environment variable BELLAB_SIMD=scalar forces the reference path.

#pragma once

#include <optional>
#include <string_view>

namespace bellab::simd {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);
std::optional<Isa> parse_isa(std::string_view name);

/// Compiled in and supported by this CPU.
bool isa_available(Isa isa);

/// Best available ISA, honouring BELLAB_SIMD. Resolved once per process.
Isa active_isa();

}  // namespace bellab::simd
