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

#include "csikit/power_map.hpp"
#include "csikit/dataset.hpp"
#include "csikit/text.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <thread>
#include <cstdio>
#include <memory>

namespace csikit
{
    MapQuantity parse_map_quantity(std::string_view s)
    {
        if (s == "power" || s == "received_power")
            return MapQuantity::received_power;
        if (s == "correlation" || s == "channel_correlation")
            return MapQuantity::channel_correlation;
        throw std::invalid_argument("unknown map quantity '" + std::string(s) + "'");
    }

    GridNode PowerMap::argmax() const
    {
        const auto it = std::max_element(power.begin(), power.end());
        const auto i = static_cast<std::size_t>(it - power.begin());
        return {i % grid.nx(), i / grid.nx()};
    }

    double PowerMap::max_power() const { return *std::max_element(power.begin(), power.end()); }

    namespace
    {
        double node_power(const CsiSample &node, const PrecodingWeights &weights, const LinkBudget &budget,
                          MapQuantity quantity)
        {
            if (quantity == MapQuantity::received_power)
                return received_power(node.h, weights, budget).total;
            CsiMatrix unit = node.h;
            for (Eigen::Index k = 0; k < unit.cols(); ++k)
            {
                const double n = unit.col(k).norm();
                if (n > 0.0)
                    unit.col(k) /= n;
            }
            return received_power(unit, weights, budget).total;
        }
    }

    PowerMap power_map(const SampleGrid &grid, const ChannelField &field, std::span<const CsiSample> targets,
                       const LinkBudget &budget, const PowerMapOptions &options)
    {
        grid.validate();
        budget.validate();
        if (targets.empty())
            throw std::invalid_argument("power map: no target");
        std::vector<CsiMatrix> channels;
        for (const auto &t : targets)
            channels.push_back(t.h);
        const auto weights = compute_weights(options.scheme, channels);
        const auto M = channels[0].rows();
        const auto F = channels[0].cols();

        PowerMap map;
        map.grid = grid;
        map.target = targets[0].label.value_or(Position3{});
        map.quantity = options.quantity;
        const auto nx = grid.nx();
        const auto count = grid.count();
        map.power.assign(count, 0.0);

        auto evaluate = [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i)
            {
                const auto node = field(grid.node(i % nx, i / nx));
                if (node.h.rows() != M || node.h.cols() != F)
                    throw std::invalid_argument("power map: node channel is " + std::to_string(node.h.rows()) + "x" +
                                                std::to_string(node.h.cols()) + ", target is " + std::to_string(M) +
                                                "x" + std::to_string(F));
                map.power[i] = node_power(node, weights, budget, options.quantity);
            }
        };

        const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(count)));
        if (threads == 1)
            evaluate(0, count);
        else
        {
            std::vector<std::exception_ptr> errors(threads);
            {
                std::vector<std::jthread> pool;
                for (unsigned t = 0; t < threads; ++t)
                    pool.emplace_back([&, t] {
                        try
                        {
                            evaluate(count * t / threads, count * (t + 1) / threads);
                        }
                        catch (...)
                        {
                            errors[t] = std::current_exception();
                        }
                    });
            }
            for (const auto &e : errors)
                if (e)
                    std::rethrow_exception(e);
        }

        const double peak = map.max_power();
        map.values.resize(count);
        for (std::size_t i = 0; i < count; ++i)
            map.values[i] = peak > 0.0 ? map.power[i] / peak : 0.0;
        return map;
    }

    void normalize_jointly(std::span<PowerMap> maps)
    {
        double peak = 0.0;
        for (const auto &m : maps)
            peak = std::max(peak, m.max_power());
        for (auto &m : maps)
            for (std::size_t i = 0; i < m.power.size(); ++i)
                m.values[i] = peak > 0.0 ? m.power[i] / peak : 0.0;
    }

    ChannelField field_from_samples(std::vector<CsiSample> samples)
    {
        auto key = [](double x, double y) { return std::pair{std::llround(x * 1e6), std::llround(y * 1e6)}; };
        auto lookup = std::make_shared<std::map<std::pair<long long, long long>, CsiSample>>();
        for (auto &s : samples)
        {
            if (!s.label)
                throw std::invalid_argument("power map field: unlabelled sample");
            (*lookup)[key(s.label->x, s.label->y)] = std::move(s);
        }
        return [lookup, key](const Position3 &p) -> CsiSample {
            const auto it = lookup->find(key(p.x, p.y));
            if (it == lookup->end())
                throw std::out_of_range("power map field: no sample at (" + text::format_number(p.x) + ", " +
                                        text::format_number(p.y) + ")");
            return it->second;
        };
    }

    namespace
    {
        double clamped_db(double v, double floor_db)
        {
            return v > 0.0 ? std::max(linear_to_db(v), floor_db) : floor_db;
        }
    }

    double max_adjacent_jump_db(const PowerMap &map, double floor_db)
    {
        const auto nx = map.grid.nx();
        const auto ny = map.grid.ny();
        double jump = 0.0;
        for (std::size_t iy = 0; iy < ny; ++iy)
            for (std::size_t ix = 0; ix < nx; ++ix)
            {
                const double here = clamped_db(map.value(ix, iy), floor_db);
                if (ix + 1 < nx)
                    jump = std::max(jump, std::abs(here - clamped_db(map.value(ix + 1, iy), floor_db)));
                if (iy + 1 < ny)
                    jump = std::max(jump, std::abs(here - clamped_db(map.value(ix, iy + 1), floor_db)));
            }
        return jump;
    }

    std::string format_power_map_csv(const PowerMap &map)
    {
        // -300 dB stands in for an exact zero
        std::string out = "x_mm,y_mm,power_db\n";
        char buf[32];
        for (std::size_t iy = 0; iy < map.grid.ny(); ++iy)
            for (std::size_t ix = 0; ix < map.grid.nx(); ++ix)
            {
                const auto p = map.grid.node(ix, iy);
                std::snprintf(buf, sizeof(buf), "%.6f", clamped_db(map.value(ix, iy), -300.0));
                out += text::format_number(p.x) + "," + text::format_number(p.y) + "," + buf + "\n";
            }
        return out;
    }

    std::vector<std::uint8_t> encode_power_map_pgm(const PowerMap &map, double lo_db, double hi_db)
    {
        if (!(hi_db > lo_db))
            throw std::invalid_argument("PGM dynamic range must satisfy lo < hi");
        const auto nx = map.grid.nx();
        const auto ny = map.grid.ny();
        const std::string header = "P5\n" + std::to_string(nx) + " " + std::to_string(ny) + "\n65535\n";
        std::vector<std::uint8_t> out(header.begin(), header.end());
        out.reserve(out.size() + 2 * nx * ny);
        for (std::size_t row = 0; row < ny; ++row)
        {
            const auto iy = ny - 1 - row;
            for (std::size_t ix = 0; ix < nx; ++ix)
            {
                const double db = clamped_db(map.value(ix, iy), lo_db);
                const double t = std::clamp((db - lo_db) / (hi_db - lo_db), 0.0, 1.0);
                const auto gray = static_cast<std::uint16_t>(std::lround(t * 65535.0));
                out.push_back(static_cast<std::uint8_t>(gray >> 8));
                out.push_back(static_cast<std::uint8_t>(gray & 0xFF));
            }
        }
        return out;
    }

    void write_power_map_csv(const std::filesystem::path &path, const PowerMap &map)
    {
        write_file_atomic(path, format_power_map_csv(map));
    }

    void write_power_map_pgm(const std::filesystem::path &path, const PowerMap &map, double lo_db, double hi_db)
    {
        write_file_atomic(path, encode_power_map_pgm(map, lo_db, hi_db));
    }
}
