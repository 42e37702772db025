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

#include "csikit/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace csikit
{
    namespace
    {
        std::size_t axis_count(double extent, double resolution)
        {
            // Tolerate extents like 1250.0000000001 from config arithmetic
            const double steps = std::floor(extent / resolution + 1e-9);
            return static_cast<std::size_t>(steps) + 1;
        }
    }

    void SampleGrid::validate() const
    {
        if (!origin.is_finite())
            throw std::invalid_argument("grid origin must be finite");
        if (!(x_extent_mm >= 0.0) || !(y_extent_mm >= 0.0) || !std::isfinite(x_extent_mm) ||
            !std::isfinite(y_extent_mm))
            throw std::invalid_argument("grid extents must be finite and nonnegative");
        if (!(resolution_mm > 0.0) || !std::isfinite(resolution_mm))
            throw std::invalid_argument("grid resolution must be positive");
        if (positioner_id < 0 || positioner_id > 3)
            throw std::invalid_argument("positioner id must be in [0, 3]");
    }

    std::size_t SampleGrid::nx() const { return axis_count(x_extent_mm, resolution_mm); }
    std::size_t SampleGrid::ny() const { return axis_count(y_extent_mm, resolution_mm); }

    Position3 SampleGrid::node(std::size_t ix, std::size_t iy) const
    {
        return {origin.x + static_cast<double>(ix) * resolution_mm,
                origin.y + static_cast<double>(iy) * resolution_mm, origin.z};
    }

    Traversal parse_traversal(std::string_view s)
    {
        if (s == "raster")
            return Traversal::raster;
        if (s == "serpentine")
            return Traversal::serpentine;
        throw std::invalid_argument("unknown traversal pattern '" + std::string(s) + "'");
    }

    std::vector<GridNode> grid_nodes(const SampleGrid &grid, Traversal order)
    {
        grid.validate();
        const auto nx = grid.nx();
        const auto ny = grid.ny();
        std::vector<GridNode> out;
        out.reserve(nx * ny);
        for (std::size_t iy = 0; iy < ny; ++iy)
        {
            const bool reverse = order == Traversal::serpentine && (iy % 2 == 1);
            for (std::size_t k = 0; k < nx; ++k)
                out.push_back({reverse ? nx - 1 - k : k, iy});
        }
        return out;
    }

    std::vector<Position3> grid_positions(const SampleGrid &grid, Traversal order)
    {
        const auto nodes = grid_nodes(grid, order);
        std::vector<Position3> out;
        out.reserve(nodes.size());
        for (const auto &n : nodes)
            out.push_back(grid.node(n.ix, n.iy));
        return out;
    }

    Position3 SiteLayout::table_origin(int positioner_id) const
    {
        if (positioner_id < 0 || positioner_id > 3)
            throw std::invalid_argument("positioner id must be in [0, 3]");
        if (const auto &o = table_origin_override[static_cast<std::size_t>(positioner_id)])
            return *o;
        return {roi_x0_mm + (positioner_id % 2) * table_extent_mm,
                standoff_mm + (positioner_id / 2) * table_extent_mm, user_height_mm};
    }

    Position3 SiteLayout::roi_centre() const
    {
        return {roi_x0_mm + table_extent_mm, standoff_mm + table_extent_mm, user_height_mm};
    }

    SampleGrid positioner_grid(const SiteLayout &site, int positioner_id, double resolution_mm)
    {
        SampleGrid g;
        g.origin = site.table_origin(positioner_id);
        g.x_extent_mm = site.table_extent_mm;
        g.y_extent_mm = site.table_extent_mm;
        g.resolution_mm = resolution_mm;
        g.positioner_id = positioner_id;
        g.validate();
        return g;
    }
}
