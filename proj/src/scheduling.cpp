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

#include "csikit/scheduling.hpp"
#include "csikit/rng.hpp"
#include "csikit/text.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace csikit
{
    void UserPool::validate() const
    {
        if (users.empty())
            return;
        const auto M = users[0].csi.antennas();
        const auto F = users[0].csi.subcarriers();
        for (const auto &u : users)
        {
            if (!u.position.is_finite())
                throw std::invalid_argument("user pool: non-finite position for user " + std::to_string(u.user_ref));
            if (u.csi.antennas() != M || u.csi.subcarriers() != F)
                throw std::invalid_argument("user pool: CSI dimensions differ for user " + std::to_string(u.user_ref));
        }
    }

    std::size_t Schedule::scheduled_users() const
    {
        std::size_t n = 0;
        for (const auto &g : groups)
            n += g.size();
        return n;
    }

    std::vector<std::size_t> sus_select(const UserPool &pool, double alpha, std::size_t max_users)
    {
        if (!(alpha > 0.0 && alpha <= 1.0))
            throw std::invalid_argument("SUS: alpha must lie in (0, 1]");
        if (pool.users.empty())
            throw std::invalid_argument("SUS: empty user pool");
        pool.validate();
        if (max_users == 0)
            max_users = std::min(pool.size(), static_cast<std::size_t>(pool.users[0].csi.antennas()));

        // Wideband channel: all subcarriers stacked into one vector
        const auto n = pool.users[0].csi.h.size();
        std::vector<Eigen::VectorXcd> g;
        g.reserve(pool.size());
        for (const auto &u : pool.users)
            g.push_back(Eigen::Map<const Eigen::VectorXcd>(u.csi.h.data(), n));

        std::vector<std::size_t> candidates;
        for (std::size_t k = 0; k < g.size(); ++k)
            if (g[k].norm() > 0.0)
                candidates.push_back(k);

        std::vector<Eigen::VectorXcd> basis;
        std::vector<std::size_t> selected;
        while (selected.size() < max_users && !candidates.empty())
        {
            std::size_t best = candidates.size();
            double best_norm = -1.0;
            Eigen::VectorXcd best_orth;
            for (std::size_t c = 0; c < candidates.size(); ++c)
            {
                Eigen::VectorXcd orth = g[candidates[c]];
                for (const auto &b : basis)
                    orth -= b.dot(g[candidates[c]]) * b;
                const double norm = orth.norm();
                if (norm > best_norm)
                {
                    best_norm = norm;
                    best = c;
                    best_orth = std::move(orth);
                }
            }
            const auto chosen = candidates[best];
            if (best_norm <= 1e-12 * g[chosen].norm())
                break;
            selected.push_back(chosen);
            basis.push_back(best_orth / best_norm);
            candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(best));

            const auto &b = basis.back();
            std::erase_if(candidates,
                          [&](std::size_t k) { return std::abs(b.dot(g[k])) / g[k].norm() >= alpha; });
        }
        return selected;
    }

    Schedule sus_schedule(const UserPool &pool, std::size_t group_size, double alpha)
    {
        if (group_size < 1)
            throw std::invalid_argument("SUS: group size must be at least 1");
        if (pool.users.empty())
            throw std::invalid_argument("SUS: empty user pool");
        Schedule s;
        s.group_size = group_size;
        std::vector<std::size_t> remaining(pool.size());
        std::iota(remaining.begin(), remaining.end(), std::size_t{0});
        while (!remaining.empty())
        {
            UserPool sub;
            for (auto idx : remaining)
                sub.users.push_back(pool.users[idx]);
            auto picked = sus_select(sub, alpha, group_size);
            if (picked.empty())
                picked.push_back(0); // only zero channels left
            std::vector<std::size_t> group;
            for (auto p : picked)
                group.push_back(remaining[p]);
            std::sort(picked.begin(), picked.end(), std::greater<>());
            for (auto p : picked)
                remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(p));
            s.groups.push_back(std::move(group));
        }
        return s;
    }

    std::vector<std::size_t> flock_order(std::span<const Position3> positions)
    {
        if (positions.empty())
            throw std::invalid_argument("DEF: empty user pool");
        const auto K = positions.size();
        std::vector<std::size_t> order{0};
        std::vector<bool> placed(K, false);
        placed[0] = true;
        while (order.size() < K)
        {
            const auto &last = positions[order.back()];
            std::size_t best = K;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t u = 0; u < K; ++u)
                if (!placed[u])
                {
                    const double d = distance_mm(positions[u], last);
                    if (d < best_d)
                    {
                        best_d = d;
                        best = u;
                    }
                }
            placed[best] = true;
            order.push_back(best);
        }
        return order;
    }

    Schedule def_assign(std::span<const Position3> positions, std::span<const std::size_t> order,
                        std::size_t group_size)
    {
        if (group_size < 1)
            throw std::invalid_argument("DEF: group size must be at least 1");
        Schedule s;
        s.group_size = group_size;
        s.groups.resize((order.size() + group_size - 1) / group_size);
        for (auto u : order)
        {
            std::size_t best = s.groups.size();
            double best_score = -1.0;
            for (std::size_t g = 0; g < s.groups.size(); ++g)
            {
                if (s.groups[g].size() >= group_size)
                    continue;
                double score = std::numeric_limits<double>::infinity();
                for (auto v : s.groups[g])
                    score = std::min(score, distance_mm(positions[u], positions[v]));
                if (score > best_score)
                {
                    best_score = score;
                    best = g;
                }
            }
            s.groups[best].push_back(u);
        }
        return s;
    }

    Schedule chunk_schedule(std::span<const std::size_t> order, std::size_t group_size)
    {
        if (group_size < 1)
            throw std::invalid_argument("group size must be at least 1");
        Schedule s;
        s.group_size = group_size;
        for (std::size_t i = 0; i < order.size(); i += group_size)
            s.groups.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(i),
                                  order.begin() + static_cast<std::ptrdiff_t>(std::min(order.size(), i + group_size)));
        return s;
    }

    Schedule def_schedule(const UserPool &pool, std::size_t group_size)
    {
        pool.validate();
        std::vector<Position3> positions;
        for (const auto &u : pool.users)
            positions.push_back(u.position);
        if (group_size < 1)
            throw std::invalid_argument("DEF: group size must be at least 1");
        return def_assign(positions, flock_order(positions), group_size);
    }

    Schedule random_schedule(std::size_t users, std::size_t group_size, std::uint64_t seed)
    {
        std::vector<std::size_t> order(users);
        std::iota(order.begin(), order.end(), std::size_t{0});
        Rng rng(seed);
        rng.shuffle(std::span(order));
        return chunk_schedule(order, group_size);
    }

    double min_intra_group_distance(const Schedule &schedule, std::span<const Position3> positions)
    {
        double best = std::numeric_limits<double>::infinity();
        for (const auto &g : schedule.groups)
            for (std::size_t a = 0; a < g.size(); ++a)
                for (std::size_t b = a + 1; b < g.size(); ++b)
                    best = std::min(best, distance_mm(positions[g[a]], positions[g[b]]));
        return best;
    }

    ScheduleEvaluation evaluate_schedule(const Schedule &schedule, const UserPool &pool, PrecodingScheme scheme,
                                         const LinkBudget &budget)
    {
        pool.validate();
        if (schedule.groups.empty())
            throw std::invalid_argument("schedule has no groups");
        ScheduleEvaluation out;
        std::vector<Position3> positions;
        for (const auto &u : pool.users)
            positions.push_back(u.position);

        for (std::size_t gi = 0; gi < schedule.groups.size(); ++gi)
        {
            const auto &g = schedule.groups[gi];
            std::vector<CsiMatrix> channels;
            for (auto idx : g)
            {
                if (idx >= pool.size())
                    throw std::out_of_range("schedule references user " + std::to_string(idx) + " outside the pool");
                channels.push_back(pool.users[idx].csi.h);
            }
            if (channels.empty())
                throw std::invalid_argument("schedule group " + std::to_string(gi) + " is empty");
            if (static_cast<Eigen::Index>(channels.size()) > channels[0].rows())
                throw std::invalid_argument("schedule group " + std::to_string(gi) + " has " +
                                            std::to_string(channels.size()) + " users for " +
                                            std::to_string(channels[0].rows()) + " antennas");
            out.group_sum_se.push_back(group_spectral_efficiency(channels, scheme, budget).sum);
        }
        out.mean_sum_se = std::accumulate(out.group_sum_se.begin(), out.group_sum_se.end(), 0.0) /
                          static_cast<double>(out.group_sum_se.size());
        out.min_intra_group_distance_mm = min_intra_group_distance(schedule, positions);
        return out;
    }

    std::string format_schedule_csv(const Schedule &schedule, const UserPool &pool)
    {
        std::string out = "group_id,user_id,x_mm,y_mm\n";
        for (std::size_t gi = 0; gi < schedule.groups.size(); ++gi)
            for (auto idx : schedule.groups[gi])
            {
                const auto &u = pool.users.at(idx);
                out += std::to_string(gi) + "," + std::to_string(u.user_ref) + "," +
                       text::format_number(u.position.x) + "," + text::format_number(u.position.y) + "\n";
            }
        return out;
    }
}
