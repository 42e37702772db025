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

#ifndef CSIKIT_SCHEDULING_HPP
#define CSIKIT_SCHEDULING_HPP

#include "csikit/precoding.hpp"
#include "csikit/types.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace csikit
{
    struct PoolUser
    {
        int user_ref = 0;
        CsiSample csi;
        Position3 position; // estimate, mm
    };

    struct UserPool
    {
        std::vector<PoolUser> users;

        std::size_t size() const { return users.size(); }
        void validate() const;
    };

    // Ordered groups of indices into the pool
    struct Schedule
    {
        std::vector<std::vector<std::size_t>> groups;
        std::size_t group_size = 1;

        std::size_t scheduled_users() const;
    };

    // Semi-orthogonal user selection on the subcarrier-stacked channel. Returns pool indices
    // in selection order.
    std::vector<std::size_t> sus_select(const UserPool &pool, double alpha = 0.3, std::size_t max_users = 0);

    // Groups formed by running SUS repeatedly on the users not yet placed, at most N per group
    Schedule sus_schedule(const UserPool &pool, std::size_t group_size, double alpha = 0.3);

    // Distance-enhanced flocking. Users are first chained into a tour where each step goes to
    // the nearest user not yet visited, starting from pool index 0. Walking that tour, each user
    // joins the open group (capacity N, ceil(K/N) groups) whose closest member is farthest away.
    // Ties go to the lowest index.
    Schedule def_schedule(const UserPool &pool, std::size_t group_size);

    // Nearest-neighbour tour behind def_schedule
    std::vector<std::size_t> flock_order(std::span<const Position3> positions);

    // Assignment step behind def_schedule, applied to users in `order`
    Schedule def_assign(std::span<const Position3> positions, std::span<const std::size_t> order,
                        std::size_t group_size);

    // Consecutive blocks of `group_size` taken from `order`
    Schedule chunk_schedule(std::span<const std::size_t> order, std::size_t group_size);

    // Uniformly random grouping, the reference DEF is compared against
    Schedule random_schedule(std::size_t users, std::size_t group_size, std::uint64_t seed);

    // Smallest Euclidean distance between two users sharing a group; +inf when no group has two users
    double min_intra_group_distance(const Schedule &schedule, std::span<const Position3> positions);

    struct ScheduleEvaluation
    {
        std::vector<double> group_sum_se;
        double mean_sum_se = 0.0;
        double min_intra_group_distance_mm = 0.0;
    };

    ScheduleEvaluation evaluate_schedule(const Schedule &schedule, const UserPool &pool, PrecodingScheme scheme,
                                         const LinkBudget &budget);

    // CSV `group_id,user_id,x_mm,y_mm`; user_id is the pool user's reference
    std::string format_schedule_csv(const Schedule &schedule, const UserPool &pool);
}

#endif
