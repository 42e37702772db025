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

#include "csikit/text.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace csikit::text
{
    std::string format_number(double v)
    {
        if (v == 0.0)
            return "0"; // also folds -0
        char buf[64];
        auto res = std::to_chars(buf, buf + sizeof(buf), v);
        return std::string(buf, res.ptr);
    }

    double parse_number(std::string_view s, std::string_view what)
    {
        s = trim(s);
        if (!s.empty() && s.front() == '+')
            s.remove_prefix(1);
        double v = 0.0;
        auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
            throw std::invalid_argument("malformed " + std::string(what) + ": '" + std::string(s) + "'");
        return v;
    }

    long long parse_integer(std::string_view s, std::string_view what)
    {
        s = trim(s);
        long long v = 0;
        auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
            throw std::invalid_argument("malformed " + std::string(what) + ": '" + std::string(s) + "'");
        return v;
    }

    std::string_view trim(std::string_view s)
    {
        const auto ws = " \t\r\n";
        const auto first = s.find_first_not_of(ws);
        if (first == std::string_view::npos)
            return {};
        const auto last = s.find_last_not_of(ws);
        return s.substr(first, last - first + 1);
    }

    std::vector<std::string_view> split(std::string_view s, char sep)
    {
        std::vector<std::string_view> out;
        std::size_t start = 0;
        while (true)
        {
            const auto pos = s.find(sep, start);
            if (pos == std::string_view::npos)
            {
                out.push_back(s.substr(start));
                return out;
            }
            out.push_back(s.substr(start, pos - start));
            start = pos + 1;
        }
    }

    std::map<std::string, std::string> parse_key_values(std::string_view content)
    {
        std::map<std::string, std::string> out;
        int line_no = 0;
        for (auto line : split(content, '\n'))
        {
            ++line_no;
            if (const auto hash = line.find('#'); hash != std::string_view::npos)
                line = line.substr(0, hash);
            line = trim(line);
            if (line.empty())
                continue;
            const auto eq = line.find('=');
            if (eq == std::string_view::npos)
                throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected 'key = value'");
            const auto key = trim(line.substr(0, eq));
            const auto value = trim(line.substr(eq + 1));
            if (key.empty())
                throw std::invalid_argument("config line " + std::to_string(line_no) + ": empty key");
            out[std::string(key)] = std::string(value);
        }
        return out;
    }

    std::map<std::string, std::string> load_key_values(const std::filesystem::path &path)
    {
        return parse_key_values(read_file(path));
    }

    std::string read_file(const std::filesystem::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw std::runtime_error("cannot open '" + path.string() + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
}
