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

#ifndef CSIKIT_RNG_HPP
#define CSIKIT_RNG_HPP

#include <cstdint>
#include <random>
#include <span>

namespace csikit
{
    // std::mt19937_64 has a fully specified output sequence, but the standard
    // distributions do not. These draws are bit-identical across toolchains so
    // seeded runs reproduce everywhere.
    class Rng
    {
    public:
        explicit Rng(std::uint64_t seed) : engine_(seed) {}

        std::uint64_t next_u64() { return engine_(); }

        // [0, 1)
        double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
        double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

        // [0, n), unbiased
        std::uint64_t index(std::uint64_t n);

        // Standard normal, Box-Muller
        double normal();

        template <typename T>
        void shuffle(std::span<T> values)
        {
            for (std::size_t i = values.size(); i > 1; --i)
            {
                const auto j = static_cast<std::size_t>(index(i));
                std::swap(values[i - 1], values[j]);
            }
        }

    private:
        std::mt19937_64 engine_;
        double spare_ = 0.0;
        bool has_spare_ = false;
    };

    // SplitMix64 finaliser, for deriving independent stream seeds
    std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);
}

#endif
