//
// Copyright 2026 The bioner-gen Authors
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
//

#ifndef BIONER_TOOLS_COMMANDS_H_
#define BIONER_TOOLS_COMMANDS_H_

#include <string>
#include <vector>

namespace bioner::cli {

// Runs one `bioner` invocation. `args` excludes the program name. Returns the
// process exit code: 0 ok, 1 usage, 2 data error, 3 failed --check or rerun
// mismatch.
int RunCli(std::vector<std::string> args);

}  // namespace bioner::cli

#endif  // BIONER_TOOLS_COMMANDS_H_
