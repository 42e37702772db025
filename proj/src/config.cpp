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

#include "csikit/config.hpp"
#include "csikit/text.hpp"

#include <stdexcept>

namespace csikit
{
    ArrayGeometry ToolkitConfig::geometry() const
    {
        if (coordinates)
            return load_geometry_csv(*coordinates, topology);
        TopologyParams p = topology_params;
        p.da_centre = site.roi_centre();
        return build_topology(topology, p);
    }

    void ToolkitConfig::apply(const std::map<std::string, std::string> &values)
    {
        for (const auto &[key, value] : values)
        {
            auto num = [&] { return text::parse_number(value, key); };
            auto integer = [&] { return static_cast<int>(text::parse_integer(value, key)); };

            if (key == "carrier_hz")
                radio.carrier_hz = num();
            else if (key == "subcarrier_spacing_hz")
                radio.subcarrier_spacing_hz = num();
            else if (key == "total_subcarriers")
                radio.total_subcarriers = integer();
            else if (key == "pilot_count")
                radio.pilot_count = integer();
            else if (key == "interleave_factor")
                radio.interleave_factor = integer();
            else if (key == "tx_power_dbm")
                radio.tx_power_dbm = num();
            else if (key == "rx_gain_db")
                radio.rx_gain_db = num();
            else if (key == "symbol_duration_s")
                radio.symbol_duration_s = num();
            else if (key == "topology")
                topology = parse_topology_kind(value);
            else if (key == "pitch_mm")
                topology_params.pitch_mm = num();
            else if (key == "array_height_mm")
                topology_params.array_height_mm = num();
            else if (key == "da_radius_mm")
                topology_params.da_radius_mm = num();
            else if (key == "coordinates")
                coordinates = value;
            else if (key == "standoff_mm")
                site.standoff_mm = num();
            else if (key == "roi_x0_mm")
                site.roi_x0_mm = num();
            else if (key == "table_extent_mm")
                site.table_extent_mm = num();
            else if (key == "user_height_mm")
                site.user_height_mm = num();
            else if (key == "pattern_exponent")
                pattern_exponent = num();
            else if (key == "noise_power_dbm")
                noise_power_dbm = num();
            else if (key.size() == 21 && key.starts_with("positioner") && key.ends_with("_origin_mm"))
            {
                // positionerN_origin_mm = x, y
                const int id = key[10] - '0';
                if (id < 0 || id > 3)
                    throw std::invalid_argument("config: positioner id out of range in '" + key + "'");
                const auto parts = text::split(value, ',');
                if (parts.size() != 2)
                    throw std::invalid_argument("config: '" + key + "' expects 'x, y'");
                site.table_origin_override[static_cast<std::size_t>(id)] =
                    Position3{text::parse_number(parts[0], key), text::parse_number(parts[1], key), 0.0};
            }
            else
                throw std::invalid_argument("config: unknown key '" + key + "'");
        }
        // Overrides carry only xy; height follows the user height
        for (auto &o : site.table_origin_override)
            if (o)
                o->z = site.user_height_mm;
        radio.validate();
        if (pattern_exponent < 0.0)
            throw std::invalid_argument("config: pattern_exponent must be nonnegative");
    }

    ToolkitConfig load_config(const std::filesystem::path &path)
    {
        ToolkitConfig cfg;
        cfg.apply(text::load_key_values(path));
        if (cfg.coordinates && cfg.coordinates->is_relative())
            cfg.coordinates = path.parent_path() / *cfg.coordinates;
        return cfg;
    }
}
