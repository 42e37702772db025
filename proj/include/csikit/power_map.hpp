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

#ifndef CSIKIT_POWER_MAP_HPP
#define CSIKIT_POWER_MAP_HPP

#include "csikit/grid.hpp"
#include "csikit/precoding.hpp"
#include "csikit/types.hpp"

#include <filesystem>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace csikit
{
    enum class MapQuantity
    {
        // Power delivered to a user at the node, including its path loss
        received_power,
        // Same, with the node's channel scaled to unit norm per subcarrier: the beam
        // pattern as a channel-correlation field, peaking at the target itself
        channel_correlation,
    };

    MapQuantity parse_map_quantity(std::string_view s);

    struct PowerMap
    {
        SampleGrid grid;
        Position3 target;
        MapQuantity quantity = MapQuantity::received_power;
        std::vector<double> power;  // linear, row-major: iy * nx + ix
        std::vector<double> values; // power / reference max, in [0, 1] when self-normalised

        double value(std::size_t ix, std::size_t iy) const { return values[iy * grid.nx() + ix]; }
        GridNode argmax() const;
        double max_power() const;
    };

    // Channel of a user standing at a grid node
    using ChannelField = std::function<CsiSample(const Position3 &)>;

    struct PowerMapOptions
    {
        PrecodingScheme scheme = PrecodingScheme::mrt;
        MapQuantity quantity = MapQuantity::received_power;
        unsigned threads = 1; // node evaluation is independent; results do not depend on this
    };

    // Weights are computed once from the target channels; every node is then evaluated
    // against them. Values come back normalised by the map's own maximum.
    PowerMap power_map(const SampleGrid &grid, const ChannelField &field, std::span<const CsiSample> targets,
                       const LinkBudget &budget, const PowerMapOptions &options = {});

    // Rescales `values` of every map by the common maximum power across the set
    void normalize_jointly(std::span<PowerMap> maps);

    // Field backed by labelled samples; lookups must hit a label within 1e-6 mm in xy
    ChannelField field_from_samples(std::vector<CsiSample> samples);

    // Largest |dB difference| between 4-neighbours, values clamped below at floor_db
    double max_adjacent_jump_db(const PowerMap &map, double floor_db);

    // CSV `x_mm,y_mm,power_db` of the normalised values
    std::string format_power_map_csv(const PowerMap &map);

    // 16-bit binary PGM (P5), row 0 = largest y. Gray is linear in dB over [lo_db, hi_db].
    std::vector<std::uint8_t> encode_power_map_pgm(const PowerMap &map, double lo_db = -40.0, double hi_db = 0.0);

    void write_power_map_csv(const std::filesystem::path &path, const PowerMap &map);
    void write_power_map_pgm(const std::filesystem::path &path, const PowerMap &map, double lo_db = -40.0,
                             double hi_db = 0.0);
}

#endif
