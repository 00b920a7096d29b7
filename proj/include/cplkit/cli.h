// Copyright 2026 The cpl-kit Authors
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

#ifndef CPLKIT_CLI_H_
#define CPLKIT_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace cplkit {

inline constexpr char kToolVersion[] = "0.1.0";

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitInfeasible = 3;

// Runs the cpl-kit command line. `args` excludes the program name. Results
// go to `out` as JSON; input errors go to `err` as {"error": {...}}.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace cplkit

#endif  // CPLKIT_CLI_H_
