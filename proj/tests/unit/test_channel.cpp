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

#include "csikit/channel.hpp"
#include "csikit/topology.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace csikit;

namespace
{
    constexpr double pi = std::numbers::pi;

    ArrayGeometry single_element(Position3 at = {}, Position3 facing = {0, 1, 0})
    {
        return {TopologyKind::ura, {{at, facing}}};
    }

    // Independent free-space oracle, distances in metres, no phase reduction
    Complex friis(double f, double d_m)
    {
        const double lambda = 299792458.0 / f;
        return lambda / (4.0 * pi * d_m) * std::exp(Complex{0.0, -2.0 * pi * f * d_m / 299792458.0});
    }
}

TEST_CASE("pilot frequencies interleave users across the band")
{
    RadioConfig r;
    const auto f0 = pilot_frequencies(r, 0);
    REQUIRE(f0.size() == 100);
    CHECK(f0.front() == doctest::Approx(2.61e9 - 600 * 15e3));
    for (std::size_t k = 1; k < f0.size(); ++k)
        CHECK(f0[k] - f0[k - 1] == doctest::Approx(180e3));
    for (int u = 1; u < 12; ++u)
    {
        const auto fu = pilot_frequencies(r, u);
        for (std::size_t k = 0; k < fu.size(); ++k)
            CHECK(fu[k] - f0[k] == doctest::Approx(u * 15e3));
    }
    CHECK_THROWS_AS(pilot_frequencies(r, 12), std::invalid_argument);
    CHECK_THROWS_AS(pilot_frequencies(r, -1), std::invalid_argument);
}

TEST_CASE("single element LoS matches the free-space formula")
{
    RadioConfig r;
    r.total_subcarriers = 12;
    r.pilot_count = 1;
    r.interleave_factor = 12;
    r.carrier_hz = 2.61e9 + 6 * 15e3; // user 0 pilot lands exactly on 2.61 GHz
    const auto h = los_channel(single_element(), {0, 1000, 0}, r, {}, 0).h;
    REQUIRE(h.rows() == 1);
    REQUIRE(h.cols() == 1);
    CHECK(std::abs(h(0, 0)) == doctest::Approx(9.140e-3).epsilon(1e-3));
    CHECK(std::abs(h(0, 0)) == doctest::Approx(299792458.0 / 2.61e9 / (4 * pi)).epsilon(1e-12));
}

TEST_CASE("URA LoS matches the oracle per antenna and subcarrier")
{
    const RadioConfig r;
    const auto geom = build_topology(TopologyKind::ura);
    const Position3 user{123.0, 1777.0, 950.0};
    const int uid = 5;
    const auto csi = los_channel(geom, user, r, {}, uid);
    REQUIRE(csi.h.rows() == 64);
    REQUIRE(csi.h.cols() == 100);
    CHECK(csi.user_id == uid);
    REQUIRE(csi.label);
    CHECK(*csi.label == user);
    const auto freqs = pilot_frequencies(r, uid);
    double worst = 0.0;
    for (int m = 0; m < 64; ++m)
        for (int k = 0; k < 100; ++k)
        {
            const double d = distance_mm(geom.elements[m].position, user) / 1000.0;
            const Complex want = friis(freqs[k], d);
            worst = std::max(worst, std::abs(csi.h(m, k) - want) / std::abs(want));
        }
    CHECK(worst < 1e-7);
}

TEST_CASE("two-ray oracle with one scatterer")
{
    const RadioConfig r;
    const auto geom = single_element({0, 0, 1000});
    const Position3 user{0, 2000, 1000};
    const Scatterer s{{1500, 1000, 1000}, Complex{-0.5, 0.25}};
    const auto h = multipath_channel(geom, user, r, {}, std::span(&s, 1), 0).h;
    const auto freqs = pilot_frequencies(r, 0);
    const double d0 = 2.0;
    const double d1 = distance_mm({0, 0, 1000}, s.position) / 1000.0 + distance_mm(s.position, user) / 1000.0;
    for (int k = 0; k < 100; ++k)
    {
        const Complex want = friis(freqs[k], d0) + s.reflection * friis(freqs[k], d1);
        CHECK(std::abs(h(0, k) - want) < 1e-7 * std::abs(want));
    }

    ChannelConfig blocked;
    blocked.rician_enabled = false;
    const auto nlos = multipath_channel(geom, user, r, blocked, std::span(&s, 1), 0).h;
    for (int k = 0; k < 100; ++k)
        CHECK(std::abs(nlos(0, k) - s.reflection * friis(freqs[k], d1)) < 1e-7 * std::abs(nlos(0, k)));
}

TEST_CASE("zero reflection scatterers leave the LoS channel bit-identical")
{
    const RadioConfig r;
    const auto geom = build_topology(TopologyKind::da);
    const Position3 user{-300, 2100, 1000};
    const std::vector<Scatterer> s{{{500, 3000, 1200}, Complex{0, 0}}, {{-900, 1800, 400}, Complex{0, 0}}};
    const auto a = los_channel(geom, user, r, {}, 2).h;
    const auto b = multipath_channel(geom, user, r, {}, s, 2).h;
    CHECK((a.array() == b.array()).all());
}

TEST_CASE("channel errors")
{
    const RadioConfig r;
    const auto geom = single_element();
    CHECK_THROWS_AS(los_channel(geom, {0, 0, 0}, r, {}, 0), std::invalid_argument);
    CHECK_THROWS_AS(los_channel(geom, {0, 1000, 0}, r, {}, 12), std::invalid_argument);
    const Scatterer strong{{0, 500, 0}, Complex{1.0, 0.5}};
    CHECK_THROWS_AS(multipath_channel(geom, {0, 1000, 0}, r, {}, std::span(&strong, 1), 0), std::invalid_argument);
    ChannelConfig bad;
    bad.pattern_exponent = -1.0;
    CHECK_THROWS_AS(los_channel(geom, {0, 1000, 0}, r, bad, 0), std::invalid_argument);
}

TEST_CASE("element pattern")
{
    const ArrayElement e{{0, 0, 0}, {0, 1, 0}};
    CHECK(element_gain(e, {0, 1000, 0}, 0.0) == 1.0);
    CHECK(element_gain(e, {0, -1000, 0}, 0.0) == 1.0);
    CHECK(element_gain(e, {0, 1000, 0}, 2.0) == doctest::Approx(1.0));
    CHECK(element_gain(e, {1000, 1000, 0}, 2.0) == doctest::Approx(0.5));
    CHECK(element_gain(e, {0, -1000, 0}, 2.0) == 0.0);
}

TEST_CASE("noise has the requested per-entry variance")
{
    Rng rng(1);
    CsiSample clean(testing::random_channel(rng, 64, 100), 0);
    const double signal = clean.h.squaredNorm() / clean.h.size();
    for (double snr : {0.0, 10.0, 25.0})
    {
        double measured = 0.0;
        const int trials = 20;
        for (int t = 0; t < trials; ++t)
        {
            const auto noisy = add_noise(clean, {snr, mix_seed(99, t)});
            measured += (noisy.h - clean.h).squaredNorm() / clean.h.size();
        }
        measured /= trials;
        CHECK(measured == doctest::Approx(signal * std::pow(10.0, -snr / 10.0)).epsilon(0.05));
    }
    const auto same = add_noise(clean, {});
    CHECK((same.h.array() == clean.h.array()).all());
    const auto a = add_noise(clean, {10.0, 4});
    const auto b = add_noise(clean, {10.0, 4});
    CHECK((a.h.array() == b.h.array()).all());
}

TEST_CASE("scatterer CSV")
{
    const auto s = parse_scatterers_csv("x_mm,y_mm,z_mm,gamma_re,gamma_im\n# wall\n1,2,3,0.5,-0.5\n");
    REQUIRE(s.size() == 1);
    CHECK(s[0].reflection == Complex{0.5, -0.5});
    CHECK_THROWS(parse_scatterers_csv("1,2,3,1,1\n"));
    CHECK_THROWS(parse_scatterers_csv("1,2,3\n"));
}
