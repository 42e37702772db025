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

#ifndef CSIKIT_GRID_HPP
#define CSIKIT_GRID_HPP

#include "csikit/types.hpp"

#include <array>
#include <optional>
#include <string_view>
#include <vector>

namespace csikit
{
    // Rectangular node grid covered by one xy-positioner
    struct SampleGrid
    {
        Position3 origin;
        double x_extent_mm = 1250.0;
        double y_extent_mm = 1250.0;
        double resolution_mm = 5.0;
        int positioner_id = 0;

        void validate() const;

        // floor(extent / resolution) + 1
        std::size_t nx() const;
        std::size_t ny() const;
        std::size_t count() const { return nx() * ny(); }

        Position3 node(std::size_t ix, std::size_t iy) const;
    };

    enum class Traversal
    {
        raster,
        serpentine
    };

    Traversal parse_traversal(std::string_view s);

    struct GridNode
    {
        std::size_t ix = 0;
        std::size_t iy = 0;
        friend bool operator==(const GridNode &, const GridNode &) = default;
    };

    // Node indices in visiting order. Rows run along x; serpentine reverses every odd row.
    std::vector<GridNode> grid_nodes(const SampleGrid &grid, Traversal order);
    std::vector<Position3> grid_positions(const SampleGrid &grid, Traversal order);

    // Lab layout: four positioner tables tiled 2x2 in front of the BS
    struct SiteLayout
    {
        double standoff_mm = 1000.0;     // URA plane to the near edge of the ROI
        double roi_x0_mm = -1250.0;      // left edge of the ROI
        double table_extent_mm = 1250.0; // per positioner, both axes
        double user_height_mm = 1000.0;
        std::array<std::optional<Position3>, 4> table_origin_override{};

        Position3 table_origin(int positioner_id) const;
        Position3 roi_centre() const;
    };

    SampleGrid positioner_grid(const SiteLayout &site, int positioner_id, double resolution_mm);
}

#endif
