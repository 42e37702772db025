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

#ifndef CSIKIT_TEST_SUPPORT_HPP
#define CSIKIT_TEST_SUPPORT_HPP

#include "csikit/rng.hpp"
#include "csikit/types.hpp"

#include <filesystem>
#include <string>

namespace csikit::testing
{
    // Fresh directory under the build tree, emptied on construction
    inline std::filesystem::path scratch_dir(const std::string &name)
    {
        const auto dir = std::filesystem::path(CSIKIT_TEST_TMP) / name;
        std::filesystem::remove_all(dir);
        std::filesystem::create_directories(dir);
        return dir;
    }

    // i.i.d. CN(0, 1) entries
    inline CsiMatrix random_channel(Rng &rng, Eigen::Index m, Eigen::Index f)
    {
        CsiMatrix h(m, f);
        for (Eigen::Index k = 0; k < f; ++k)
            for (Eigen::Index i = 0; i < m; ++i)
            {
                const double re = rng.normal();
                const double im = rng.normal();
                h(i, k) = Complex{re, im} / std::sqrt(2.0);
            }
        return h;
    }

    // Entries exactly representable in float32, so the file format is lossless for them
    inline CsiMatrix random_float_channel(Rng &rng, Eigen::Index m, Eigen::Index f)
    {
        CsiMatrix h(m, f);
        for (Eigen::Index k = 0; k < f; ++k)
            for (Eigen::Index i = 0; i < m; ++i)
            {
                const auto re = static_cast<float>(rng.normal() / std::sqrt(2.0));
                const auto im = static_cast<float>(rng.normal() / std::sqrt(2.0));
                h(i, k) = Complex{re, im};
            }
        return h;
    }
}

#endif
