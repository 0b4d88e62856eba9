// Copyright 2026 The DSR Toolkit Authors.
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

#ifndef DSR_CLI_H_
#define DSR_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace dsr {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitIo = 2;

// Runs one subcommand. `args` excludes the program name. Results go to the
// files named by the flags (or `out` where a subcommand prints a value);
// diagnostics go to `err`.
int Run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace dsr

#endif  // DSR_CLI_H_
