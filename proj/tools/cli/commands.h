// Copyright 2026 The MetaFidelity Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// The `metafidelity` command line:
//
//   check TEACHER STUDENT [--delta D] [--tau T]... [--bins B]...
//         [--temperature T] [--prob-floor E] [--eca-threshold X]
//         [--eca-mode all-bins|occupied-bins] [--lenient] [--out PATH]
//   attack-quality PAIRS [--before DUMP --after DUMP] [--no-acs] [--lenient]
//         [--out PATH]
//   stats friedman|wilcoxon CSV
//   plotdata violations|kl-box REPORT
//
// Reports go to --out when given, otherwise to standard output. Diagnostics
// go to standard error. METAFIDELITY_THREADS caps internal parallelism.

#ifndef METAFIDELITY_TOOLS_CLI_COMMANDS_H_
#define METAFIDELITY_TOOLS_CLI_COMMANDS_H_

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace metafidelity::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolated = 1;
inline constexpr int kExitInputError = 2;

inline constexpr const char* kThreadsEnv = "METAFIDELITY_THREADS";

// Thread cap from METAFIDELITY_THREADS; 0 (use all cores) when unset.
// Throws kInvalidConfig for a value that is not a positive integer.
std::size_t ThreadsFromEnvironment();

// Runs the CLI on `args` (without the program name) and returns the exit
// code. Never throws.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace metafidelity::cli

#endif  // METAFIDELITY_TOOLS_CLI_COMMANDS_H_
