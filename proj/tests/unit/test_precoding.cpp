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

#include "csikit/precoding.hpp"

#include <doctest.h>

#include <Eigen/QR>

using namespace csikit;

namespace
{
    Complex rx(const CsiMatrix &h, const CsiMatrix &w, Eigen::Index f)
    {
        Complex s{};
        for (Eigen::Index m = 0; m < h.rows(); ++m)
            s += h(m, f) * w(m, f);
        return s;
    }
}

TEST_CASE("MRT weights are the unit-norm conjugate channel")
{
    Rng rng(1);
    const auto h = testing::random_channel(rng, 16, 10);
    const auto w = mrt_weights(h);
    REQUIRE(w.users() == 1);
    for (Eigen::Index f = 0; f < 10; ++f)
    {
        CHECK(w.w[0].col(f).norm() == doctest::Approx(1.0));
        const Complex g = rx(h, w.w[0], f);
        CHECK(g.real() == doctest::Approx(h.col(f).norm()));
        CHECK(std::abs(g.imag()) < 1e-12);
    }
}

TEST_CASE("MRT received power is P times the channel energy")
{
    Rng rng(2);
    const LinkBudget b{3.5, 1.0};
    for (int t = 0; t < 20; ++t)
    {
        const auto h = testing::random_channel(rng, 64, 100);
        const auto p = received_power(h, mrt_weights(h), b);
        double mean = 0.0;
        for (Eigen::Index f = 0; f < 100; ++f)
        {
            const double want = 3.5 * h.col(f).squaredNorm();
            CHECK(std::abs(p.per_subcarrier[static_cast<std::size_t>(f)] - want) / want < 1e-12);
            mean += want / 100.0;
        }
        CHECK(p.total == doctest::Approx(mean).epsilon(1e-12));
    }
}

TEST_CASE("ZF matches the hand-computed 2x2 inverse")
{
    // A = H^T with rows h1^T, h2^T; the ZF directions are the columns of A^-1
    const Complex a{1, 2}, b{0.5, -1}, c{-0.25, 0.75}, d{2, 0.5};
    CsiMatrix h1(2, 1), h2(2, 1);
    h1 << a, b;
    h2 << c, d;
    const Complex det = a * d - b * c;
    Eigen::Vector2cd inv1, inv2;
    inv1 << d / det, -c / det;
    inv2 << -b / det, a / det;

    const std::vector<CsiMatrix> users{h1, h2};
    const auto w = zf_weights(users);
    REQUIRE(w.users() == 2);
    const Eigen::Vector2cd w1 = w.w[0].col(0), w2 = w.w[1].col(0);
    CHECK(w1.norm() == doctest::Approx(1.0));
    CHECK(w2.norm() == doctest::Approx(1.0));
    CHECK(std::abs(w1.dot(inv1)) == doctest::Approx(inv1.norm()));
    CHECK(std::abs(w2.dot(inv2)) == doctest::Approx(inv2.norm()));
    CHECK(std::abs(rx(h1, w.w[1], 0)) < 1e-14);
    CHECK(std::abs(rx(h2, w.w[0], 0)) < 1e-14);
}

TEST_CASE("ZF nulls cross-user power on random channels")
{
    Rng rng(3);
    std::vector<CsiMatrix> users;
    for (int k = 0; k < 8; ++k)
        users.push_back(testing::random_channel(rng, 64, 20));
    const auto w = zf_weights(users);
    for (Eigen::Index f = 0; f < 20; ++f)
        for (std::size_t i = 0; i < 8; ++i)
        {
            const double own = std::norm(rx(users[i], w.w[i], f));
            for (std::size_t j = 0; j < 8; ++j)
                if (i != j)
                    CHECK(std::norm(rx(users[i], w.w[j], f)) / own < 1e-20);
        }
}

TEST_CASE("ZF rejects rank-deficient groups")
{
    Rng rng(4);
    const auto h = testing::random_channel(rng, 8, 3);
    CsiMatrix twin = h * Complex{0.0, 2.0};
    const std::vector<CsiMatrix> users{h, twin};
    CHECK_THROWS_AS(zf_weights(users), std::domain_error);
    std::vector<CsiMatrix> too_many;
    for (int k = 0; k < 5; ++k)
        too_many.push_back(testing::random_channel(rng, 4, 2));
    CHECK_THROWS_AS(zf_weights(too_many), std::invalid_argument);
    CHECK_THROWS_AS(zf_weights(std::vector<CsiMatrix>{}), std::invalid_argument);
}

TEST_CASE("group SE agrees with a pseudo-inverse oracle")
{
    Rng rng(5);
    const LinkBudget b{10.0, 0.5};
    std::vector<CsiMatrix> users;
    for (int k = 0; k < 4; ++k)
        users.push_back(testing::random_channel(rng, 16, 6));
    const auto se = group_spectral_efficiency(users, PrecodingScheme::zf, b);

    std::vector<double> oracle(4, 0.0);
    for (Eigen::Index f = 0; f < 6; ++f)
    {
        Eigen::MatrixXcd A(4, 16);
        for (int k = 0; k < 4; ++k)
            A.row(k) = users[static_cast<std::size_t>(k)].col(f).transpose();
        const Eigen::MatrixXcd pinv = A.completeOrthogonalDecomposition().pseudoInverse();
        for (int k = 0; k < 4; ++k)
        {
            const Eigen::VectorXcd w = pinv.col(k) / pinv.col(k).norm();
            const double g = std::norm((A.row(k) * w)(0));
            oracle[static_cast<std::size_t>(k)] += std::log2(1.0 + 2.5 * g / 0.5) / 6.0;
        }
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < 4; ++k)
    {
        CHECK(se.per_user[k] == doctest::Approx(oracle[k]).epsilon(1e-9));
        sum += oracle[k];
    }
    CHECK(se.sum == doctest::Approx(sum).epsilon(1e-9));

    // single-user MRT: SINR = P ||h||^2 / N
    const auto one = group_spectral_efficiency(std::span(users.data(), 1), PrecodingScheme::mrt, b);
    double want = 0.0;
    for (Eigen::Index f = 0; f < 6; ++f)
        want += std::log2(1.0 + 10.0 * users[0].col(f).squaredNorm() / 0.5) / 6.0;
    CHECK(one.sum == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("MRT interference appears in SINR")
{
    Rng rng(6);
    std::vector<CsiMatrix> users{testing::random_channel(rng, 8, 4), testing::random_channel(rng, 8, 4)};
    const LinkBudget b{1e6, 1.0};
    const auto mrt = group_spectral_efficiency(users, PrecodingScheme::mrt, b);
    const auto zf = group_spectral_efficiency(users, PrecodingScheme::zf, b);
    CHECK(zf.sum > mrt.sum);
}

TEST_CASE("link budget from radio")
{
    RadioConfig r;
    const auto b = LinkBudget::from_radio(r, -80.0);
    CHECK(b.total_tx_power == doctest::Approx(std::pow(10.0, 3.35)));
    CHECK(b.noise_power == doctest::Approx(1e-8));
    CHECK(b.per_user(4) == doctest::Approx(b.total_tx_power / 4));
    CHECK_THROWS(LinkBudget{0.0, 1.0}.validate());
    CHECK_THROWS(LinkBudget{1.0, -1.0}.validate());
}

TEST_CASE("served users is monotone in the SE threshold and reproducible")
{
    Rng rng(7);
    std::vector<CsiSample> pool;
    for (int k = 0; k < 24; ++k)
        pool.emplace_back(testing::random_channel(rng, 16, 8) * 0.01, 0);
    const LinkBudget b{100.0, 1e-3};
    std::size_t prev = 1000;
    for (double tau : {0.5, 1.0, 2.0, 4.0, 8.0})
    {
        const auto r = max_served_users(pool, tau, 5, 11, b);
        CHECK(r.per_trial.size() == 5);
        CHECK(r.median <= 16);
        CHECK(r.median <= prev);
        prev = r.median;
        CHECK(max_served_users(pool, tau, 5, 11, b).per_trial == r.per_trial);
    }
    CHECK_THROWS_AS(max_served_users(pool, 0.0, 5, 1, b), std::invalid_argument);
    CHECK_THROWS_AS(max_served_users({}, 1.0, 5, 1, b), std::invalid_argument);
}

TEST_CASE("scheme names")
{
    CHECK(parse_precoding_scheme("mrt") == PrecodingScheme::mrt);
    CHECK(parse_precoding_scheme("zf") == PrecodingScheme::zf);
    CHECK_THROWS_AS(parse_precoding_scheme("mmse"), std::invalid_argument);
}
