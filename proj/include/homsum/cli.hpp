// Copyright (c) 2026 The homsum Authors. All Rights Reserved.
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

#ifndef HOMSUM_CLI_HPP_
#define HOMSUM_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace homsum::cli {

/// Subcommand dispatch. Reports go to `out` (or the --out file), logs and
/// errors to `err`. Exit status: 0 on success, 1 on usage or validation
/// errors, 2 on budget or unexpected runtime errors. A fixed set of flags
/// (including --seed, --streams and --threads) yields byte-identical output.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace homsum::cli

#endif  // HOMSUM_CLI_HPP_
