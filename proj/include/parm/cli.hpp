// Copyright 2026 The parm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "parm/miner.hpp"

namespace parm {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitDiffers = 3;

/// `X` is absolute, `X%` is relative to |V|. Throws ConfigError.
MinSupport parse_min_support(std::string_view text);

/// Entry point for the `parm` tool. `args` excludes the program name.
int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace parm
