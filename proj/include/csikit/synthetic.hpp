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

#ifndef CSIKIT_SYNTHETIC_HPP
#define CSIKIT_SYNTHETIC_HPP

#include "csikit/channel.hpp"
#include "csikit/grid.hpp"
#include "csikit/scheduling.hpp"
#include "csikit/topology.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace csikit
{
    // Uniform draws over the 2x2 ROI at user height
    std::vector<Position3> random_roi_positions(const SiteLayout &site, std::size_t count, std::uint64_t seed);

    // One labelled sample per position. Noise for sample i is seeded from (seed, i).
    std::vector<CsiSample> synthesize_samples(const ArrayGeometry &geom, const RadioConfig &radio,
                                              const ChannelConfig &cfg, std::span<const Position3> positions,
                                              int user_id = 0, const NoiseSpec &noise = {},
                                              std::span<const Scatterer> scatterers = {});

    // Pool whose position estimates are the sample labels
    UserPool make_pool(std::span<const CsiSample> samples);
}

#endif
