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

#include "csikit/synthetic.hpp"
#include "csikit/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace csikit
{
    std::vector<Position3> random_roi_positions(const SiteLayout &site, std::size_t count, std::uint64_t seed)
    {
        Rng rng(seed);
        const double span = 2.0 * site.table_extent_mm;
        std::vector<Position3> out;
        out.reserve(count);
        for (std::size_t i = 0; i < count; ++i)
        {
            const double x = site.roi_x0_mm + rng.uniform(0.0, span);
            const double y = site.standoff_mm + rng.uniform(0.0, span);
            out.push_back({x, y, site.user_height_mm});
        }
        return out;
    }

    std::vector<CsiSample> synthesize_samples(const ArrayGeometry &geom, const RadioConfig &radio,
                                              const ChannelConfig &cfg, std::span<const Position3> positions,
                                              int user_id, const NoiseSpec &noise,
                                              std::span<const Scatterer> scatterers)
    {
        std::vector<CsiSample> out;
        out.reserve(positions.size());
        for (std::size_t i = 0; i < positions.size(); ++i)
        {
            auto csi = multipath_channel(geom, positions[i], radio, cfg, scatterers, user_id);
            out.push_back(add_noise(csi, {noise.snr_db, mix_seed(noise.seed, i)}));
        }
        return out;
    }

    UserPool make_pool(std::span<const CsiSample> samples)
    {
        UserPool pool;
        for (std::size_t i = 0; i < samples.size(); ++i)
        {
            if (!samples[i].label)
                throw std::invalid_argument("user pool: sample " + std::to_string(i) + " has no position");
            pool.users.push_back({static_cast<int>(i), samples[i], *samples[i].label});
        }
        return pool;
    }
}
