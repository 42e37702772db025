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

#include "csikit/topology.hpp"
#include "csikit/text.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

namespace csikit
{
    TopologyKind parse_topology_kind(std::string_view s)
    {
        if (s == "ura" || s == "URA")
            return TopologyKind::ura;
        if (s == "ula" || s == "ULA")
            return TopologyKind::ula;
        if (s == "da" || s == "DA")
            return TopologyKind::da;
        throw std::invalid_argument("unknown topology kind '" + std::string(s) + "'");
    }

    std::string to_string(TopologyKind kind)
    {
        switch (kind)
        {
        case TopologyKind::ura:
            return "ura";
        case TopologyKind::ula:
            return "ula";
        case TopologyKind::da:
            return "da";
        }
        throw std::invalid_argument("unknown topology kind");
    }

    namespace
    {
        ArrayGeometry build_ura(const TopologyParams &p)
        {
            if (p.ura_side < 1)
                throw std::invalid_argument("URA side must be at least 1");
            ArrayGeometry g{TopologyKind::ura, {}};
            const double mid = (p.ura_side - 1) / 2.0;
            for (int r = 0; r < p.ura_side; ++r)
                for (int c = 0; c < p.ura_side; ++c)
                    g.elements.push_back({{(c - mid) * p.pitch_mm, 0.0, p.array_height_mm + (r - mid) * p.pitch_mm},
                                          {0.0, 1.0, 0.0}});
            return g;
        }

        ArrayGeometry build_ula(const TopologyParams &p)
        {
            if (p.ula_elements < 1)
                throw std::invalid_argument("ULA needs at least one element");
            ArrayGeometry g{TopologyKind::ula, {}};
            const double mid = (p.ula_elements - 1) / 2.0;
            for (int m = 0; m < p.ula_elements; ++m)
                g.elements.push_back({{(m - mid) * p.pitch_mm, 0.0, p.array_height_mm}, {0.0, 1.0, 0.0}});
            return g;
        }

        ArrayGeometry build_da(const TopologyParams &p)
        {
            if (!(p.da_radius_mm > 0.0))
                throw std::invalid_argument("DA octagon radius must be positive");
            if (p.da_subarrays < 1 || p.da_subarray_size < 1)
                throw std::invalid_argument("DA needs at least one sub-array of one element");
            ArrayGeometry g{TopologyKind::da, {}};
            const double mid = (p.da_subarray_size - 1) / 2.0;
            for (int s = 0; s < p.da_subarrays; ++s)
            {
                const double a = 2.0 * std::numbers::pi * s / p.da_subarrays;
                const double ca = std::cos(a);
                const double sa = std::sin(a);
                const Position3 vertex{p.da_centre.x + p.da_radius_mm * ca, p.da_centre.y + p.da_radius_mm * sa,
                                       p.array_height_mm};
                const Position3 inward{-ca, -sa, 0.0};
                const Position3 tangent{-sa, ca, 0.0};
                for (int e = 0; e < p.da_subarray_size; ++e)
                    g.elements.push_back({vertex + tangent * ((e - mid) * p.pitch_mm), inward});
            }
            return g;
        }
    }

    ArrayGeometry build_topology(TopologyKind kind, const TopologyParams &params)
    {
        if (!(params.pitch_mm > 0.0) || !std::isfinite(params.pitch_mm))
            throw std::invalid_argument("element spacing must be positive");
        switch (kind)
        {
        case TopologyKind::ura:
            return build_ura(params);
        case TopologyKind::ula:
            return build_ula(params);
        case TopologyKind::da:
            return build_da(params);
        }
        throw std::invalid_argument("unknown topology kind");
    }

    double ula_centre_span_mm(const TopologyParams &params) { return (params.ula_elements - 1) * params.pitch_mm; }

    double ula_footprint_mm(const TopologyParams &params) { return params.ula_elements * params.pitch_mm; }

    ArrayGeometry parse_geometry_csv(std::string_view content, TopologyKind kind)
    {
        std::vector<std::optional<ArrayElement>> slots;
        int line_no = 0;
        for (auto line : text::split(content, '\n'))
        {
            ++line_no;
            line = text::trim(line);
            if (line.empty() || line.front() == '#')
                continue;
            const auto cols = text::split(line, ',');
            if (cols.size() != 7)
                throw std::invalid_argument("geometry CSV line " + std::to_string(line_no) + ": expected 7 columns");
            if (line_no == 1 && text::trim(cols[0]) == "element_id")
                continue;
            const auto id = text::parse_integer(cols[0], "element_id");
            if (id < 0 || id > 1 << 16)
                throw std::invalid_argument("geometry CSV line " + std::to_string(line_no) + ": bad element id");
            ArrayElement e;
            e.position = {text::parse_number(cols[1], "x_mm"), text::parse_number(cols[2], "y_mm"),
                          text::parse_number(cols[3], "z_mm")};
            e.facing = {text::parse_number(cols[4], "nx"), text::parse_number(cols[5], "ny"),
                        text::parse_number(cols[6], "nz")};
            const double n = e.facing.norm();
            if (!e.position.is_finite() || !std::isfinite(n) || std::abs(n - 1.0) > 1e-6)
                throw std::invalid_argument("geometry CSV line " + std::to_string(line_no) +
                                            ": facing vector must be unit norm");
            e.facing = e.facing * (1.0 / n);
            const auto idx = static_cast<std::size_t>(id);
            if (idx >= slots.size())
                slots.resize(idx + 1);
            if (slots[idx])
                throw std::invalid_argument("geometry CSV: duplicate element id " + std::to_string(id));
            slots[idx] = e;
        }
        ArrayGeometry g{kind, {}};
        for (std::size_t i = 0; i < slots.size(); ++i)
        {
            if (!slots[i])
                throw std::invalid_argument("geometry CSV: missing element id " + std::to_string(i));
            g.elements.push_back(*slots[i]);
        }
        if (g.elements.empty())
            throw std::invalid_argument("geometry CSV: no elements");
        return g;
    }

    ArrayGeometry load_geometry_csv(const std::filesystem::path &path, TopologyKind kind)
    {
        return parse_geometry_csv(text::read_file(path), kind);
    }
}
