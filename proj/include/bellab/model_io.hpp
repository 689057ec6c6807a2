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

// Model files and builtin fixtures.
//
// A model file is a JSON object:
//
//   {
//     "quartet": [[1, -1], [1, -1], [1, -1], [1, -1]],      // A, A', B, B'; optional
//     "microstates": [
//       {"weight": 0.5, "local_response": {"A": [1, 0], "Ap": [0.5, 0.5], "B": [0, 1], "Bp": [1, 0]}},
//       {"weight": 0.5, "behaviour": {"AB": [[0.5, 0], [0, 0.5]], "ABp": ..., "ApB": ..., "ApBp": ...}}
//     ],
//     "detection": {"A": 0.9, "Ap": 0.9, "B": [1, 0.8], "Bp": 1},   // optional
//     "setting_policy": {"AB": 0.25, "ABp": 0.25, "ApB": 0.25, "ApBp": 0.25},  // optional
//     "memory": {"rule": "adaptive", "strength": 1.0}               // optional
//   }
//
// Behaviour tables have one row per A-side outcome and one column per B-side
// outcome. Detection and setting entries are either one number for every
// microstate or an array with one number per microstate.
//
// Builtin sources:
//   builtin:singlet?angles=A,A',B,B'   analyzer angles in degrees
//   builtin:prbox
//   builtin:detection-loophole
//   builtin:strategies                the 16 deterministic strategies, uniform
//   builtin:adaptive-memory?strength=S strategies driven by the adaptive rule
//   builtin:random-local?seed=N&microstates=K

#pragma once

#include <string>
#include <string_view>

#include "bellab/hvmodel.hpp"

namespace bellab {

struct ModelBundle {
    FiniteMicrostateModel model;
    DetectionPolicy detection;
    SettingPolicy settings;
    MemoryRule memory;
    std::string source;
};

/// Parses model JSON text. Throws ModelFileError naming `origin` and the line
/// of the offending value.
ModelBundle parse_model(std::string_view text, const std::string& origin = "<model>");

/// A file path or a builtin name. Throws ModelFileError.
ModelBundle load_model(const std::string& source);

ModelBundle builtin_model(std::string_view spec);

}  // namespace bellab
