// Copyright 2026 The PhyloAdapt Authors
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

#ifndef PHYLOADAPT_CLI_H_
#define PHYLOADAPT_CLI_H_

#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace phyloadapt::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitInternal = 3,
};

// Runs one subcommand. `args` excludes the program name. Diagnostics go to
// `err`, progress to `out`.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

// Flat "key=value" lines; '#' starts a comment; a key may repeat for
// list-valued options. Throws DataError on a malformed line.
std::multimap<std::string, std::string> ReadKeyValueFile(const std::string& path);

}  // namespace phyloadapt::cli

#endif  // PHYLOADAPT_CLI_H_
