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
#include "csikit/dataset.hpp"
#include "csikit/grid.hpp"
#include "csikit/localization.hpp"
#include "csikit/synthetic.hpp"
#include "csikit/topology.hpp"

#include <doctest.h>

#include <numbers>

using namespace csikit;

#define CSIKIT_DA_LOO_BASELINE 1.6172

namespace
{
    std::vector<CsiSample> grid_samples(TopologyKind kind, Position3 origin, std::size_t n, double res,
                                        NoiseSpec noise = {})
    {
        SampleGrid g;
        g.origin = origin;
        g.resolution_mm = res;
        g.x_extent_mm = g.y_extent_mm = static_cast<double>(n - 1) * res;
        TopologyParams p;
        p.da_centre = SiteLayout{}.roi_centre();
        const auto pos = grid_positions(g, Traversal::raster);
        return synthesize_samples(build_topology(kind, p), RadioConfig{}, {}, pos, 0, noise);
    }
}

TEST_CASE("raw features are unit norm and scale invariant")
{
    Rng rng(1);
    const CsiSample s(testing::random_channel(rng, 8, 5), 0);
    const auto f = extract_features(s);
    CHECK(f.size() == 80);
    CHECK(f.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f[0] == doctest::Approx(s.h(0, 0).real() / s.h.norm()));
    CHECK(f[1] == doctest::Approx(s.h(0, 0).imag() / s.h.norm()));
    CHECK(f[2] == doctest::Approx(s.h(0, 1).real() / s.h.norm()));
    const CsiSample scaled(s.h * 5.0, 0);
    CHECK((extract_features(scaled) - f).norm() < 1e-14);

    const auto mag = extract_features(s, {FeatureMode::magnitude_only});
    CHECK(mag.size() == 40);
    CHECK(mag.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(extract_features(CsiSample(CsiMatrix::Zero(2, 2), 0)), std::invalid_argument);
}

TEST_CASE("phase-relative features ignore a global rotation")
{
    Rng rng(2);
    const CsiSample s(testing::random_channel(rng, 6, 4), 0);
    const CsiSample rotated(s.h * std::polar(1.0, 2.2), 0);
    const auto a = extract_features(s, {FeatureMode::phase_relative_to_first_antenna});
    const auto b = extract_features(rotated, {FeatureMode::phase_relative_to_first_antenna});
    for (Eigen::Index i = 0; i < a.size(); ++i)
    {
        const double diff = std::remainder(a[i] - b[i], 2.0 * std::numbers::pi);
        CHECK(std::abs(diff) < 1e-12);
        CHECK(a[i] > -std::numbers::pi);
        CHECK(a[i] <= std::numbers::pi);
    }
    // direct angle arithmetic for one entry
    const double want = std::remainder(std::arg(s.h(3, 2)) - std::arg(s.h(0, 2)), 2.0 * std::numbers::pi);
    CHECK(a[3 * 4 + 2] == doctest::Approx(want));
    for (Eigen::Index k = 0; k < 4; ++k)
        CHECK(a[k] == 0.0);
}

TEST_CASE("kNN trivial cases")
{
    CsiMatrix a = CsiMatrix::Zero(2, 1), b = a, c = a;
    a(0, 0) = 1.0;
    b(1, 0) = 1.0;
    c << Complex{1, 0}, Complex{1, 0};
    std::vector<CsiSample> db_samples{CsiSample(a, 0, Position3{0, 0, 0}), CsiSample(b, 0, Position3{10, 20, 0})};
    const auto db = build_fingerprints(db_samples);
    KnnOptions one;
    one.k = 1;
    CHECK(knn_locate(db, db_samples[1], one) == Position3{10, 20, 0});
    KnnOptions two;
    two.k = 2;
    two.weighting = KnnWeighting::uniform;
    CHECK(knn_locate(db, CsiSample(c, 0), two) == Position3{5, 10, 0});
    two.k = 3;
    CHECK_THROWS_AS(knn_locate(db, CsiSample(c, 0), two), std::invalid_argument);
    CHECK_THROWS_AS(knn_locate(FingerprintDb{}, CsiSample(c, 0), one), std::invalid_argument);

    // ties resolve in database order
    std::vector<CsiSample> twins{CsiSample(a, 0, Position3{1, 0, 0}), CsiSample(a, 0, Position3{2, 0, 0})};
    CHECK(knn_locate(build_fingerprints(twins), CsiSample(a, 0), one) == Position3{1, 0, 0});
}

TEST_CASE("fingerprint database build rules")
{
    CHECK(build_fingerprints(std::span<const CsiSample>{}).empty());
    std::vector<CsiSample> s{CsiSample(CsiMatrix::Ones(2, 2), 0, Position3{1, 1, 1}),
                             CsiSample(CsiMatrix::Ones(2, 2), 0, Position3{1, 1, 1})};
    CHECK(build_fingerprints(s).size() == 2);
    s[1].label.reset();
    CHECK_THROWS_AS(build_fingerprints(s), std::invalid_argument);
}

TEST_CASE("test set equal to the database gives zero error at k = 1")
{
    const auto samples = grid_samples(TopologyKind::ura, {0, 1500, 1000}, 6, 5.0);
    const auto db = build_fingerprints(samples);
    KnnOptions o;
    o.k = 1;
    const auto r = evaluate_localizer(db, samples, o);
    CHECK(r.mean_mm == 0.0);
    CHECK(r.p95_mm == 0.0);
    const KnnLocalizer loc(db, o);
    CHECK(evaluate_localizer(loc, samples).mean_mm == 0.0);
    CHECK_THROWS_AS(evaluate_localizer(db, std::span<const CsiSample>{}, o), std::invalid_argument);
}

TEST_CASE("noiseless leave-one-out stays within one grid diagonal")
{
    const auto samples = grid_samples(TopologyKind::ura, {-50, 1450, 1000}, 21, 5.0);
    const auto db = build_fingerprints(samples);
    KnnOptions o;
    o.k = 4;
    const auto r = leave_one_out(db, o);
    CHECK(r.errors_mm.size() == 441);
    CHECK(r.mean_mm <= 7.08);
    for (double e : r.errors_mm)
        CHECK(e >= 0.0);
}

TEST_CASE("noisy DA leave-one-out regression baseline")
{
    const auto samples = grid_samples(TopologyKind::da, {0, 2000, 1000}, 15, 5.0, {20.0, 77});
    KnnOptions o;
    const auto r = leave_one_out(build_fingerprints(samples), o);
    MESSAGE("DA 20 dB LOO mean error " << r.mean_mm << " mm");
    CHECK(r.mean_mm == doctest::Approx(CSIKIT_DA_LOO_BASELINE).epsilon(0.10));
}

TEST_CASE("report statistics")
{
    LocalizationReport r;
    r.errors_mm = {4, 1, 3, 2};
    r.summarize();
    CHECK(r.mean_mm == 2.5);
    CHECK(r.median_mm == 2.5);
    CHECK(r.p95_mm == 4.0);
    r.sample_ids = {"000000", "000001", "000002", "000003"};
    CHECK(format_report_csv(r) == "sample_id,err_mm\n000000,4.000000\n000001,1.000000\n000002,3.000000\n000003,2.000000\n");
}

TEST_CASE("fingerprint database persistence")
{
    const auto samples = grid_samples(TopologyKind::ula, {0, 1500, 1000}, 3, 10.0);
    for (auto mode : {FeatureMode::raw_unit_norm, FeatureMode::magnitude_only,
                      FeatureMode::phase_relative_to_first_antenna})
    {
        const auto db = build_fingerprints(samples, {mode}, "ula");
        const auto back = decode_fingerprints(encode_fingerprints(db));
        CHECK(back.config.mode == mode);
        CHECK(back.topology == "ula");
        CHECK(back.antennas == 64);
        CHECK(back.subcarriers == 100);
        REQUIRE(back.size() == db.size());
        for (std::size_t i = 0; i < db.size(); ++i)
        {
            CHECK(back.labels[i] == db.labels[i]);
            CHECK((back.features[i].array() == db.features[i].array()).all());
        }
    }
    auto bytes = encode_fingerprints(build_fingerprints(samples));
    bytes[0] = 'X';
    CHECK_THROWS_AS(decode_fingerprints(bytes), DatasetError);
    bytes = encode_fingerprints(build_fingerprints(samples));
    bytes.resize(bytes.size() - 3);
    CHECK_THROWS_AS(decode_fingerprints(bytes), DatasetError);
}

TEST_CASE("a full 63,001-node table fits in one database")
{
    SampleGrid g; // default table grid
    const ArrayGeometry single{TopologyKind::ura, {{{0, 0, 1000}, {0, 1, 0}}}};
    RadioConfig tiny;
    tiny.total_subcarriers = 12;
    tiny.pilot_count = 1;
    g.origin = SiteLayout{}.table_origin(0);
    const auto pos = grid_positions(g, Traversal::serpentine);
    const auto samples = synthesize_samples(single, tiny, {}, pos);
    const auto db = build_fingerprints(samples);
    CHECK(db.size() == 63001);
    CHECK(db.labels.back() == pos.back());
}
