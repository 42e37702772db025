// SPDX-License-Identifier: Apache-2.0
//
// csikit - massive MIMO CSI toolkit
// Copyright (C) 2026 The csikit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef CSIKIT_CLI_HPP
#define CSIKIT_CLI_HPP

#include <ostream>
#include <span>
#include <string>

namespace csikit
{
    // Entry point of the `csikit` tool. `args` excludes the program name.
    // Exit codes: 0 success, 1 runtime failure, 2 usage error.
    int run_cli(std::span<const std::string> args, std::ostream &out, std::ostream &err);
}

#endif
