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

#include "csikit/campaign.hpp"
#include "csikit/text.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <thread>

namespace csikit
{
    namespace
    {
        // absorbs rounding in origin + i * step - origin
        constexpr double bounds_tolerance_mm = 1e-6;
    }

    void CampaignPlan::validate() const
    {
        if (!(dwell_s >= 0.0) || !(step_s >= 0.0) || !std::isfinite(dwell_s) || !std::isfinite(step_s))
            throw std::invalid_argument("campaign plan: dwell and step times must be finite and nonnegative");
        if (dwell_s > step_s)
            throw std::invalid_argument("campaign plan: dwell time cannot exceed the per-node step time");
        if (tracks.size() > 4)
            throw std::invalid_argument("campaign plan: at most four positioners");
        std::vector<int> positioners, users;
        for (const auto &t : tracks)
        {
            t.grid.validate();
            if (t.user_id < 0 || t.user_id >= max_users)
                throw std::invalid_argument("campaign plan: user id out of range");
            positioners.push_back(t.positioner_id);
            users.push_back(t.user_id);
            for (const auto &w : t.waypoints)
            {
                const auto local = w - t.grid.origin;
                if (local.x < -bounds_tolerance_mm || local.y < -bounds_tolerance_mm ||
                    local.x > t.grid.x_extent_mm + bounds_tolerance_mm ||
                    local.y > t.grid.y_extent_mm + bounds_tolerance_mm)
                    throw std::invalid_argument("campaign plan: waypoint outside positioner " +
                                                std::to_string(t.positioner_id) + " extents");
            }
        }
        std::sort(positioners.begin(), positioners.end());
        std::sort(users.begin(), users.end());
        if (std::adjacent_find(positioners.begin(), positioners.end()) != positioners.end() ||
            std::adjacent_find(users.begin(), users.end()) != users.end())
            throw std::invalid_argument("campaign plan: positioner and user ids must be distinct");
    }

    std::size_t CampaignPlan::rounds() const
    {
        std::size_t n = 0;
        for (const auto &t : tracks)
            n = std::max(n, t.waypoints.size());
        return n;
    }

    std::size_t CampaignPlan::total_waypoints() const
    {
        std::size_t n = 0;
        for (const auto &t : tracks)
            n += t.waypoints.size();
        return n;
    }

    CampaignPlan plan_traversal(const SampleGrid &grid, Traversal pattern, double dwell_s, double step_s)
    {
        CampaignPlan plan;
        plan.dwell_s = dwell_s;
        plan.step_s = step_s;
        plan.tracks.push_back({grid.positioner_id, grid.positioner_id, grid, grid_positions(grid, pattern)});
        plan.validate();
        return plan;
    }

    CampaignPlan plan_campaign(const SiteLayout &site, const std::vector<int> &positioner_ids, double resolution_mm,
                               Traversal pattern, const std::vector<int> &user_ids)
    {
        if (!user_ids.empty() && user_ids.size() != positioner_ids.size())
            throw std::invalid_argument("campaign plan: one user id per positioner");
        CampaignPlan plan;
        for (std::size_t i = 0; i < positioner_ids.size(); ++i)
        {
            const auto grid = positioner_grid(site, positioner_ids[i], resolution_mm);
            const int user = user_ids.empty() ? positioner_ids[i] : user_ids[i];
            plan.tracks.push_back({positioner_ids[i], user, grid, grid_positions(grid, pattern)});
        }
        plan.validate();
        return plan;
    }

    namespace
    {
        std::string_view strip_line(std::string_view cmd)
        {
            if (!cmd.empty() && cmd.back() == '\n')
                cmd.remove_suffix(1);
            if (!cmd.empty() && cmd.back() == '\r')
                cmd.remove_suffix(1);
            return cmd;
        }
    }

    std::string positioner_execute(PositionerState &state, std::string_view command)
    {
        const auto line = strip_line(command);
        if (line.find_first_of("\r\n") != std::string_view::npos)
            return "error:parse\n";
        std::vector<std::string_view> words;
        for (auto w : text::split(line, ' '))
            if (!w.empty())
                words.push_back(w);
        if (words.empty())
            return "error:parse\n";

        if (words[0] == "G28")
        {
            if (words.size() != 1)
                return "error:parse\n";
            state.x_mm = 0.0;
            state.y_mm = 0.0;
            state.homed = true;
            return "ok\n";
        }
        if (words[0] == "G0" || words[0] == "G00")
        {
            std::optional<double> x, y;
            for (std::size_t i = 1; i < words.size(); ++i)
            {
                const auto w = words[i];
                auto &slot = w.front() == 'X' ? x : w.front() == 'Y' ? y : x;
                if ((w.front() != 'X' && w.front() != 'Y') || slot || w.size() < 2)
                    return "error:parse\n";
                try
                {
                    slot = text::parse_number(w.substr(1), "coordinate");
                }
                catch (const std::invalid_argument &)
                {
                    return "error:parse\n";
                }
                if (!std::isfinite(*slot))
                    return "error:parse\n";
            }
            if (!x && !y)
                return "error:parse\n";
            if (!state.homed)
                return "error:unhomed\n";
            const double nx = x.value_or(state.x_mm);
            const double ny = y.value_or(state.y_mm);
            if (nx < -bounds_tolerance_mm || ny < -bounds_tolerance_mm ||
                nx > state.x_extent_mm + bounds_tolerance_mm || ny > state.y_extent_mm + bounds_tolerance_mm)
                return "error:bounds\n";
            state.x_mm = std::clamp(nx, 0.0, state.x_extent_mm);
            state.y_mm = std::clamp(ny, 0.0, state.y_extent_mm);
            return "ok\n";
        }
        return "error:parse\n";
    }

    std::string format_move_command(double x_mm, double y_mm)
    {
        return "G0 X" + text::format_number(x_mm) + " Y" + text::format_number(y_mm) + "\n";
    }

    WallClock::WallClock() : start_(std::chrono::steady_clock::now()) {}

    void WallClock::sleep(double seconds)
    {
        if (seconds > 0.0)
            std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
    }

    double WallClock::elapsed_s() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }
}
