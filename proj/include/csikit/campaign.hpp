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

#ifndef CSIKIT_CAMPAIGN_HPP
#define CSIKIT_CAMPAIGN_HPP

#include "csikit/grid.hpp"
#include "csikit/types.hpp"

#include <chrono>
#include <string>
#include <string_view>
#include <vector>

namespace csikit
{
    // Waypoints of one positioner table, in the global frame
    struct PositionerTrack
    {
        int positioner_id = 0;
        int user_id = 0;
        SampleGrid grid;
        std::vector<Position3> waypoints;
    };

    struct CampaignPlan
    {
        std::vector<PositionerTrack> tracks;
        double dwell_s = 0.5; // settle time before a capture
        double step_s = 0.7;  // move + dwell + capture, per node

        void validate() const;
        std::size_t rounds() const;          // longest track; tables move concurrently
        std::size_t total_waypoints() const; // summed over tracks
        double duration_estimate_s() const { return static_cast<double>(rounds()) * step_s; }
    };

    CampaignPlan plan_traversal(const SampleGrid &grid, Traversal pattern, double dwell_s = 0.5,
                                double step_s = 0.7);

    // One track per listed positioner on the site's 2x2 layout; user i rides positioner i unless
    // user_ids says otherwise
    CampaignPlan plan_campaign(const SiteLayout &site, const std::vector<int> &positioner_ids, double resolution_mm,
                               Traversal pattern, const std::vector<int> &user_ids = {});

    // Single CNC table, G-code subset over LF-terminated ASCII:
    //   G28              home to (0, 0)            -> "ok\n"
    //   G0 X<mm> Y<mm>   absolute move, either axis may be omitted
    // Replies "error:unhomed\n", "error:bounds\n" or "error:parse\n" leave the state unchanged.
    struct PositionerState
    {
        double x_mm = 0.0; // table coordinates, origin at the home corner
        double y_mm = 0.0;
        bool homed = false;
        double x_extent_mm = 1250.0;
        double y_extent_mm = 1250.0;
        double accuracy_bound_mm = 0.1;
    };

    std::string positioner_execute(PositionerState &state, std::string_view command);

    // "G0 X<x> Y<y>\n" with shortest round-trip number formatting
    std::string format_move_command(double x_mm, double y_mm);

    class Clock
    {
    public:
        virtual ~Clock() = default;
        virtual void sleep(double seconds) = 0;
        virtual double elapsed_s() const = 0;
    };

    // Advances instantly; elapsed time is the sum of requested sleeps
    class SimulatedClock final : public Clock
    {
    public:
        void sleep(double seconds) override { elapsed_ += seconds; }
        double elapsed_s() const override { return elapsed_; }

    private:
        double elapsed_ = 0.0;
    };

    class WallClock final : public Clock
    {
    public:
        WallClock();
        void sleep(double seconds) override;
        double elapsed_s() const override;

    private:
        std::chrono::steady_clock::time_point start_;
    };
}

#endif
