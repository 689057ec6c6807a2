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

// Command-line front end: run, diagnose, feasibility, sweep, chsh.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bellab::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kInvalidModel = 2,
    kNumericalFailure = 3,
};

/// Default worker cap when --threads is absent.
inline constexpr const char* kThreadsEnv = "BELLAB_THREADS";

/// `args` excludes the program name. Results go to `out` (or the --out file),
/// diagnostics to `err`.
int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

}  // namespace bellab::cli
