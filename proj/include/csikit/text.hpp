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

#ifndef CSIKIT_TEXT_HPP
#define CSIKIT_TEXT_HPP

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace csikit::text
{
    // Shortest representation that parses back to the same double
    std::string format_number(double v);

    // Whole-string parse; throws std::invalid_argument naming `what` on failure
    double parse_number(std::string_view s, std::string_view what = "number");
    long long parse_integer(std::string_view s, std::string_view what = "integer");

    std::string_view trim(std::string_view s);
    std::vector<std::string_view> split(std::string_view s, char sep);

    // `key = value` lines, `#` starts a comment. Later keys override earlier ones.
    std::map<std::string, std::string> parse_key_values(std::string_view content);
    std::map<std::string, std::string> load_key_values(const std::filesystem::path &path);

    std::string read_file(const std::filesystem::path &path);
}

#endif
