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

#include "support.hpp"

#include "csikit/scheduling.hpp"
#include "csikit/synthetic.hpp"
#include "csikit/text.hpp"

#include <doctest.h>

#include <Eigen/QR>

#include <algorithm>
#include <set>

using namespace csikit;

namespace
{
    UserPool pool_from(const std::vector<CsiMatrix> &h, std::vector<Position3> pos = {})
    {
        UserPool p;
        for (std::size_t i = 0; i < h.size(); ++i)
            p.users.push_back({static_cast<int>(i), CsiSample(h[i], 0), pos.empty() ? Position3{} : pos[i]});
        return p;
    }

    // Greedy SUS re-derived from scratch each step: projections against an orthonormal basis of the
    // selected span computed by QR, eligibility re-checked for every prior basis vector
    std::vector<std::size_t> sus_replay(const std::vector<CsiMatrix> &h, double alpha, std::size_t max_users)
    {
        const auto n = h[0].size();
        std::vector<Eigen::VectorXcd> g;
        for (const auto &m : h)
            g.push_back(Eigen::Map<const Eigen::VectorXcd>(m.data(), n));
        std::vector<std::size_t> sel;
        std::vector<Eigen::VectorXcd> basis; // in selection order
        while (sel.size() < max_users)
        {
            Eigen::MatrixXcd Q;
            if (!sel.empty())
            {
                Eigen::MatrixXcd S(n, static_cast<Eigen::Index>(sel.size()));
                for (std::size_t i = 0; i < sel.size(); ++i)
                    S.col(static_cast<Eigen::Index>(i)) = g[sel[i]];
                Q = Eigen::HouseholderQR<Eigen::MatrixXcd>(S).householderQ() *
                    Eigen::MatrixXcd::Identity(n, static_cast<Eigen::Index>(sel.size()));
            }
            std::size_t best = h.size();
            double best_norm = -1.0;
            for (std::size_t u = 0; u < h.size(); ++u)
            {
                if (std::find(sel.begin(), sel.end(), u) != sel.end())
                    continue;
                bool eligible = true;
                for (const auto &b : basis)
                    eligible = eligible && std::abs(b.dot(g[u])) / g[u].norm() < alpha;
                if (!eligible)
                    continue;
                const Eigen::VectorXcd orth = sel.empty() ? g[u] : Eigen::VectorXcd(g[u] - Q * (Q.adjoint() * g[u]));
                if (orth.norm() > best_norm + 1e-9 * g[u].norm())
                {
                    best_norm = orth.norm();
                    best = u;
                }
            }
            if (best == h.size())
                break;
            const Eigen::VectorXcd orth = sel.empty() ? g[best] : Eigen::VectorXcd(g[best] - Q * (Q.adjoint() * g[best]));
            basis.push_back(orth / orth.norm());
            sel.push_back(best);
        }
        return sel;
    }

    void check_partition(const Schedule &s, std::size_t users, std::size_t n)
    {
        std::set<std::size_t> seen;
        std::size_t total = 0;
        for (const auto &g : s.groups)
        {
            CHECK(g.size() >= 1);
            CHECK(g.size() <= n);
            for (auto u : g)
            {
                CHECK(u < users);
                seen.insert(u);
                ++total;
            }
        }
        CHECK(total == users);
        CHECK(seen.size() == users);
    }
}

TEST_CASE("SUS trivial cases")
{
    CsiMatrix e1 = CsiMatrix::Zero(3, 1), e2 = e1, e3 = e1;
    e1(0, 0) = 1.0;
    e2(1, 0) = 2.0;
    e3(2, 0) = Complex{0, 3};
    CHECK(sus_select(pool_from({e1, e2, e3}), 0.5, 3) == std::vector<std::size_t>{2, 1, 0});
    CHECK(sus_select(pool_from({e1, e1}), 0.3).size() == 1);
    CHECK_THROWS_AS(sus_select(pool_from({e1}), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(sus_select(pool_from({e1}), 1.5), std::invalid_argument);
    CHECK_THROWS_AS(sus_select(UserPool{}, 0.3), std::invalid_argument);
}

TEST_CASE("SUS matches a brute-force greedy replay")
{
    Rng rng(17);
    for (int trial = 0; trial < 200; ++trial)
    {
        const auto K = static_cast<std::size_t>(2 + rng.index(7));
        const auto M = static_cast<Eigen::Index>(2 + rng.index(7));
        const auto F = static_cast<Eigen::Index>(1 + rng.index(3));
        std::vector<CsiMatrix> h;
        for (std::size_t k = 0; k < K; ++k)
            h.push_back(testing::random_channel(rng, M, F) * rng.uniform(0.5, 2.0));
        const double alpha = rng.uniform(0.2, 0.95);
        const auto cap = std::min<std::size_t>(K, static_cast<std::size_t>(M));
        const auto got = sus_select(pool_from(h), alpha);
        CHECK(got == sus_replay(h, alpha, cap));
    }
}

TEST_CASE("SUS accepted users satisfy the threshold at acceptance")
{
    Rng rng(5);
    std::vector<CsiMatrix> h;
    for (int k = 0; k < 30; ++k)
        h.push_back(testing::random_channel(rng, 16, 2));
    const double alpha = 0.4;
    const auto sel = sus_select(pool_from(h), alpha);
    std::vector<Eigen::VectorXcd> basis;
    for (auto u : sel)
    {
        Eigen::VectorXcd g = Eigen::Map<const Eigen::VectorXcd>(h[u].data(), h[u].size());
        for (const auto &b : basis)
            CHECK(std::abs(b.dot(g)) / g.norm() < alpha);
        Eigen::VectorXcd orth = g;
        for (const auto &b : basis)
            orth -= b.dot(g) * b;
        basis.push_back(orth.normalized());
    }
}

TEST_CASE("DEF collinear example")
{
    const std::vector<Position3> p{{0, 0, 0}, {1000, 0, 0}, {2000, 0, 0}, {3000, 0, 0}};
    CHECK(flock_order(p) == std::vector<std::size_t>{0, 1, 2, 3});
    const auto s = def_schedule(pool_from(std::vector<CsiMatrix>(4, CsiMatrix::Ones(2, 1)), p), 2);
    REQUIRE(s.groups.size() == 2);
    CHECK(s.groups[0] == std::vector<std::size_t>{0, 2});
    CHECK(s.groups[1] == std::vector<std::size_t>{1, 3});
    CHECK(min_intra_group_distance(s, p) == doctest::Approx(2000.0));
}

TEST_CASE("DEF tour replay: every step goes to the nearest unvisited user")
{
    Rng rng(23);
    for (int trial = 0; trial < 20; ++trial)
    {
        const auto pos = random_roi_positions(SiteLayout{}, 24, rng.next_u64());
        const auto order = flock_order(pos);
        REQUIRE(order.size() == 24);
        CHECK(order[0] == 0);
        std::set<std::size_t> placed{order[0]};
        for (std::size_t t = 1; t < order.size(); ++t)
        {
            double best = std::numeric_limits<double>::infinity();
            std::size_t arg = 0;
            for (std::size_t u = 0; u < 24; ++u)
                if (!placed.count(u) && distance_mm(pos[u], pos[order[t - 1]]) < best)
                {
                    best = distance_mm(pos[u], pos[order[t - 1]]);
                    arg = u;
                }
            CHECK(order[t] == arg);
            placed.insert(order[t]);
        }
    }
}

TEST_CASE("DEF assignment replay: each user joins the open group with the farthest closest member")
{
    Rng rng(29);
    for (int trial = 0; trial < 20; ++trial)
    {
        const std::size_t K = 2 + rng.index(30);
        const std::size_t N = 1 + rng.index(6);
        const auto pos = random_roi_positions(SiteLayout{}, K, rng.next_u64());
        const auto order = flock_order(pos);
        const auto s = def_assign(pos, order, N);
        const std::size_t G = (K + N - 1) / N;
        REQUIRE(s.groups.size() == G);

        std::vector<std::size_t> where(K);
        for (std::size_t g = 0; g < G; ++g)
            for (auto u : s.groups[g])
                where[u] = g;
        std::vector<std::vector<std::size_t>> built(G);
        for (auto u : order)
        {
            std::vector<double> score(G, -1.0);
            for (std::size_t g = 0; g < G; ++g)
                if (built[g].size() < N)
                {
                    score[g] = std::numeric_limits<double>::infinity();
                    for (auto v : built[g])
                        score[g] = std::min(score[g], distance_mm(pos[u], pos[v]));
                }
            const auto arg = static_cast<std::size_t>(std::max_element(score.begin(), score.end()) - score.begin());
            CHECK(where[u] == arg);
            built[arg].push_back(u);
        }
        CHECK(built == s.groups);
    }
}

TEST_CASE("schedules are partitions for all K and N")
{
    Rng rng(31);
    for (std::size_t K = 1; K <= 13; ++K)
        for (std::size_t N = 1; N <= 6; ++N)
        {
            std::vector<CsiMatrix> h;
            for (std::size_t k = 0; k < K; ++k)
                h.push_back(testing::random_channel(rng, 8, 2));
            const auto pos = random_roi_positions(SiteLayout{}, K, rng.next_u64());
            const auto pool = pool_from(h, pos);
            check_partition(def_schedule(pool, N), K, N);
            check_partition(sus_schedule(pool, N, 0.3), K, N);
            check_partition(random_schedule(K, N, 9), K, N);
        }
}

TEST_CASE("identical positions are still partitioned deterministically")
{
    const std::vector<Position3> same(7, Position3{1, 2, 3});
    CHECK(flock_order(same) == std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6});
    const auto s = def_assign(same, flock_order(same), 3);
    check_partition(s, 7, 3);
    CHECK(s.groups[0] == std::vector<std::size_t>{0, 3, 4});
}

TEST_CASE("evaluate schedule")
{
    Rng rng(2);
    std::vector<CsiMatrix> h{testing::random_channel(rng, 4, 3), testing::random_channel(rng, 4, 3)};
    const auto pool = pool_from(h, {{0, 0, 0}, {300, 400, 0}});
    const LinkBudget b{5.0, 1.0};
    Schedule one;
    one.group_size = 1;
    one.groups = {{0}};
    const auto e = evaluate_schedule(one, pool, PrecodingScheme::zf, b);
    CHECK(e.mean_sum_se == doctest::Approx(group_spectral_efficiency(std::span(h.data(), 1), PrecodingScheme::mrt, b).sum));
    CHECK(std::isinf(e.min_intra_group_distance_mm));

    Schedule both;
    both.group_size = 2;
    both.groups = {{0, 1}};
    CHECK(evaluate_schedule(both, pool, PrecodingScheme::zf, b).min_intra_group_distance_mm == doctest::Approx(500.0));

    std::vector<CsiMatrix> narrow;
    for (int k = 0; k < 3; ++k)
        narrow.push_back(testing::random_channel(rng, 2, 1));
    Schedule big;
    big.group_size = 3;
    big.groups = {{0, 1, 2}};
    CHECK_THROWS_AS(evaluate_schedule(big, pool_from(narrow), PrecodingScheme::zf, b), std::invalid_argument);
}

TEST_CASE("DEF spreads groups further than random grouping")
{
    int wins = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed)
    {
        const auto pos = random_roi_positions(SiteLayout{}, 24, mix_seed(seed, 1));
        const auto def = def_assign(pos, flock_order(pos), 4);
        const auto rnd = random_schedule(24, 4, mix_seed(seed, 2));
        wins += min_intra_group_distance(def, pos) >= min_intra_group_distance(rnd, pos);
    }
    CHECK(wins >= 95);
}

TEST_CASE("schedule CSV")
{
    const auto pool = pool_from({CsiMatrix::Ones(2, 1), CsiMatrix::Ones(2, 1)}, {{1.5, 2, 0}, {3, 4, 0}});
    Schedule s;
    s.group_size = 1;
    s.groups = {{1}, {0}};
    CHECK(format_schedule_csv(s, pool) == "group_id,user_id,x_mm,y_mm\n0,1,3,4\n1,0,1.5,2\n");
}
