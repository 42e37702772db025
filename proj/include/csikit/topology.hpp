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

#ifndef CSIKIT_TOPOLOGY_HPP
#define CSIKIT_TOPOLOGY_HPP

#include "csikit/types.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace csikit
{
    enum class TopologyKind
    {
        ura,
        ula,
        da
    };

    TopologyKind parse_topology_kind(std::string_view s);
    std::string to_string(TopologyKind kind);

    struct ArrayElement
    {
        Position3 position; // mm
        Position3 facing;   // unit vector, boresight of the patch
        friend bool operator==(const ArrayElement &, const ArrayElement &) = default;
    };

    struct ArrayGeometry
    {
        TopologyKind kind = TopologyKind::ura;
        std::vector<ArrayElement> elements;

        std::size_t size() const { return elements.size(); }
        friend bool operator==(const ArrayGeometry &, const ArrayGeometry &) = default;
    };

    struct TopologyParams
    {
        double pitch_mm = 70.0;
        double array_height_mm = 1000.0;
        int ura_side = 8;          // URA is ura_side x ura_side
        int ula_elements = 64;
        int da_subarrays = 8;      // octagon vertices
        int da_subarray_size = 8;
        double da_radius_mm = 2500.0;
        Position3 da_centre{0.0, 2250.0, 1000.0}; // ROI centre; z is ignored, elements use array_height_mm
    };

    // URA: square grid in the y = 0 plane, row-major from the lowest row, facing +y.
    // ULA: elements along x at y = 0, facing +y.
    // DA: one short ULA per octagon vertex, laid tangentially and facing the octagon centre.
    ArrayGeometry build_topology(TopologyKind kind, const TopologyParams &params = {});

    // Distance between the first and last element centres of the ULA
    double ula_centre_span_mm(const TopologyParams &params = {});

    // Physical length when each element occupies one full pitch (4.48 m)
    double ula_footprint_mm(const TopologyParams &params = {});

    // CSV `element_id,x_mm,y_mm,z_mm,nx,ny,nz`, optional header row. Ids must be 0..n-1 (any
    // row order); facing vectors within 1e-6 of unit norm are renormalised.
    ArrayGeometry load_geometry_csv(const std::filesystem::path &path, TopologyKind kind);
    ArrayGeometry parse_geometry_csv(std::string_view content, TopologyKind kind);
}

#endif
