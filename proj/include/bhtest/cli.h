// Copyright 2026 The bhtest Authors
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

#ifndef BHTEST_CLI_H_
#define BHTEST_CLI_H_

#include <iosfwd>
#include <string>

#include "bhtest/harness.h"

namespace bhtest {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntimeError = 1;
inline constexpr int kExitInvalidConfig = 2;

// Applies a JSON run-config object on top of `spec`. Keys mirror the long
// flag names ("class", "opponent-class", "actions", "n", ...). Throws
// kInvalidConfig naming the offending key.
void ApplyJsonConfig(const std::string& json_text, ExperimentSpec& spec);

// Subcommands: simulate, experiment, fit-check. Output goes to --out when
// given, otherwise to `out`; diagnostics go to `err`.
int CliMain(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace bhtest

#endif  // BHTEST_CLI_H_
