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

#include "csikit/localization.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>
#include <cstdio>
#include <stdexcept>

namespace csikit
{
    FeatureMode parse_feature_mode(std::string_view s)
    {
        if (s == "raw" || s == "raw_unit_norm")
            return FeatureMode::raw_unit_norm;
        if (s == "magnitude" || s == "magnitude_only")
            return FeatureMode::magnitude_only;
        if (s == "phase" || s == "phase_relative_to_first_antenna")
            return FeatureMode::phase_relative_to_first_antenna;
        throw std::invalid_argument("unknown feature mode '" + std::string(s) + "'");
    }

    std::string to_string(FeatureMode mode)
    {
        switch (mode)
        {
        case FeatureMode::raw_unit_norm:
            return "raw_unit_norm";
        case FeatureMode::magnitude_only:
            return "magnitude_only";
        case FeatureMode::phase_relative_to_first_antenna:
            return "phase_relative_to_first_antenna";
        }
        return "unknown";
    }

    KnnWeighting parse_knn_weighting(std::string_view s)
    {
        if (s == "uniform")
            return KnnWeighting::uniform;
        if (s == "inverse_distance" || s == "idw")
            return KnnWeighting::inverse_distance;
        throw std::invalid_argument("unknown kNN weighting '" + std::string(s) + "'");
    }

    Eigen::VectorXd extract_features(const CsiSample &csi, const FeatureConfig &cfg)
    {
        const auto &h = csi.h;
        const auto M = h.rows();
        const auto F = h.cols();
        if (M < 1 || F < 1)
            throw std::invalid_argument("features: empty CSI");
        const double frob = h.norm();
        if (!(frob > 0.0) || !std::isfinite(frob))
            throw std::invalid_argument("features: CSI has zero or non-finite norm");

        Eigen::VectorXd out;
        switch (cfg.mode)
        {
        case FeatureMode::raw_unit_norm:
            out.resize(2 * M * F);
            for (Eigen::Index m = 0; m < M; ++m)
                for (Eigen::Index k = 0; k < F; ++k)
                {
                    out[2 * (m * F + k)] = h(m, k).real() / frob;
                    out[2 * (m * F + k) + 1] = h(m, k).imag() / frob;
                }
            break;
        case FeatureMode::magnitude_only:
            out.resize(M * F);
            for (Eigen::Index m = 0; m < M; ++m)
                for (Eigen::Index k = 0; k < F; ++k)
                    out[m * F + k] = std::abs(h(m, k)) / frob;
            break;
        case FeatureMode::phase_relative_to_first_antenna:
            out.resize(M * F);
            for (Eigen::Index m = 0; m < M; ++m)
                for (Eigen::Index k = 0; k < F; ++k)
                {
                    double d = std::arg(h(m, k)) - std::arg(h(0, k));
                    if (d <= -std::numbers::pi)
                        d += 2.0 * std::numbers::pi;
                    else if (d > std::numbers::pi)
                        d -= 2.0 * std::numbers::pi;
                    out[m * F + k] = d;
                }
            break;
        }
        return out;
    }

    void FingerprintDb::add(const CsiSample &csi)
    {
        if (!csi.label)
            throw std::invalid_argument("fingerprint db: unlabelled sample" +
                                        (csi.sample_id.empty() ? std::string() : " '" + csi.sample_id + "'"));
        if (empty())
        {
            antennas = csi.antennas();
            subcarriers = csi.subcarriers();
        }
        else if (csi.antennas() != antennas || csi.subcarriers() != subcarriers)
            throw std::invalid_argument("fingerprint db: CSI dimensions differ from the database");
        features.push_back(extract_features(csi, config));
        labels.push_back(*csi.label);
    }

    FingerprintDb build_fingerprints(const SampleStream &stream, const FeatureConfig &cfg, std::string topology)
    {
        FingerprintDb db;
        db.config = cfg;
        db.topology = std::move(topology);
        for (const auto &item : stream)
            db.add(item.sample);
        return db;
    }

    FingerprintDb build_fingerprints(std::span<const CsiSample> samples, const FeatureConfig &cfg,
                                     std::string topology)
    {
        FingerprintDb db;
        db.config = cfg;
        db.topology = std::move(topology);
        for (const auto &s : samples)
            db.add(s);
        return db;
    }

    Position3 knn_locate(const FingerprintDb &db, const Eigen::VectorXd &query, const KnnOptions &options,
                         std::ptrdiff_t exclude)
    {
        if (db.empty())
            throw std::invalid_argument("kNN: empty fingerprint database");
        const std::size_t available = db.size() - (exclude >= 0 ? 1 : 0);
        if (options.k < 1 || options.k > available)
            throw std::invalid_argument("kNN: k must lie in [1, " + std::to_string(available) + "]");

        std::vector<std::pair<double, std::size_t>> dist;
        dist.reserve(db.size());
        for (std::size_t i = 0; i < db.size(); ++i)
        {
            if (static_cast<std::ptrdiff_t>(i) == exclude)
                continue;
            if (db.features[i].size() != query.size())
                throw std::invalid_argument("kNN: query feature length does not match the database");
            dist.emplace_back((db.features[i] - query).squaredNorm(), i);
        }
        const auto k = static_cast<std::ptrdiff_t>(options.k);
        std::partial_sort(dist.begin(), dist.begin() + k, dist.end());

        Position3 acc;
        double total = 0.0;
        for (std::ptrdiff_t n = 0; n < k; ++n)
        {
            const auto &[d2, i] = dist[static_cast<std::size_t>(n)];
            const double w = options.weighting == KnnWeighting::uniform ? 1.0 : 1.0 / (std::sqrt(d2) + options.epsilon);
            acc = acc + db.labels[i] * w;
            total += w;
        }
        return acc * (1.0 / total);
    }

    Position3 knn_locate(const FingerprintDb &db, const CsiSample &query, const KnnOptions &options)
    {
        return knn_locate(db, extract_features(query, db.config), options);
    }

    void LocalizationReport::summarize()
    {
        if (errors_mm.empty())
        {
            mean_mm = median_mm = p95_mm = 0.0;
            return;
        }
        auto sorted = errors_mm;
        std::sort(sorted.begin(), sorted.end());
        const auto n = sorted.size();
        mean_mm = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(n);
        median_mm = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
        const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(n)));
        p95_mm = sorted[std::max<std::size_t>(rank, 1) - 1];
    }

    LocalizationReport evaluate_localizer(const Localizer &localizer, std::span<const CsiSample> test_set)
    {
        if (test_set.empty())
            throw std::invalid_argument("localizer evaluation: empty test set");
        LocalizationReport report;
        for (const auto &s : test_set)
        {
            if (!s.label)
                throw std::invalid_argument("localizer evaluation: unlabelled test sample");
            report.sample_ids.push_back(s.sample_id);
            report.errors_mm.push_back(distance_mm(localizer.locate(s), *s.label));
        }
        report.summarize();
        return report;
    }

    LocalizationReport evaluate_localizer(const FingerprintDb &db, std::span<const CsiSample> test_set,
                                          const KnnOptions &options)
    {
        return evaluate_localizer(KnnLocalizer(db, options), test_set);
    }

    LocalizationReport leave_one_out(const FingerprintDb &db, const KnnOptions &options)
    {
        if (db.size() < 2)
            throw std::invalid_argument("leave-one-out needs at least two fingerprints");
        LocalizationReport report;
        for (std::size_t i = 0; i < db.size(); ++i)
        {
            const auto est = knn_locate(db, db.features[i], options, static_cast<std::ptrdiff_t>(i));
            report.sample_ids.push_back(format_sample_id(i));
            report.errors_mm.push_back(distance_mm(est, db.labels[i]));
        }
        report.summarize();
        return report;
    }

    std::string format_report_csv(const LocalizationReport &report)
    {
        std::string out = "sample_id,err_mm\n";
        char buf[32];
        for (std::size_t i = 0; i < report.errors_mm.size(); ++i)
        {
            std::snprintf(buf, sizeof(buf), "%.6f", report.errors_mm[i]);
            out += report.sample_ids[i] + "," + buf + "\n";
        }
        return out;
    }

    // ---- FPDB container -------------------------------------------------------------

    namespace
    {
        constexpr std::uint8_t fpdb_magic[4] = {'F', 'P', 'D', 'B'};
        constexpr std::uint8_t fpdb_version = 1;

        template <typename T>
        void put_le(std::vector<std::uint8_t> &out, T v)
        {
            for (std::size_t i = 0; i < sizeof(T); ++i)
                out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
        }

        void put_f64(std::vector<std::uint8_t> &out, double v) { put_le(out, std::bit_cast<std::uint64_t>(v)); }

        class Reader
        {
        public:
            explicit Reader(std::span<const std::uint8_t> b) : b_(b) {}

            template <typename T>
            T le()
            {
                need(sizeof(T));
                T v = 0;
                for (std::size_t i = 0; i < sizeof(T); ++i)
                    v = static_cast<T>(v | (static_cast<T>(b_[pos_ + i]) << (8 * i)));
                pos_ += sizeof(T);
                return v;
            }
            double f64() { return std::bit_cast<double>(le<std::uint64_t>()); }
            std::span<const std::uint8_t> bytes(std::size_t n)
            {
                need(n);
                auto s = b_.subspan(pos_, n);
                pos_ += n;
                return s;
            }
            bool done() const { return pos_ == b_.size(); }

        private:
            void need(std::size_t n) const
            {
                if (pos_ + n > b_.size())
                    throw DatasetError(DatasetErrorKind::truncated, "fingerprint database ends early");
            }
            std::span<const std::uint8_t> b_;
            std::size_t pos_ = 0;
        };
    }

    std::vector<std::uint8_t> encode_fingerprints(const FingerprintDb &db)
    {
        if (db.topology.size() > 0xFFFF || db.antennas > 0xFFFF || db.subcarriers > 0xFFFF)
            throw DatasetError(DatasetErrorKind::dimension_overflow, "fingerprint database header field too large");
        const std::size_t dim = db.features.empty() ? 0 : static_cast<std::size_t>(db.features[0].size());
        std::vector<std::uint8_t> out(std::begin(fpdb_magic), std::end(fpdb_magic));
        out.push_back(fpdb_version);
        out.push_back(static_cast<std::uint8_t>(db.config.mode));
        put_le(out, static_cast<std::uint16_t>(db.antennas));
        put_le(out, static_cast<std::uint16_t>(db.subcarriers));
        put_le(out, static_cast<std::uint16_t>(db.topology.size()));
        out.insert(out.end(), db.topology.begin(), db.topology.end());
        put_le(out, static_cast<std::uint32_t>(db.size()));
        put_le(out, static_cast<std::uint32_t>(dim));
        for (std::size_t i = 0; i < db.size(); ++i)
        {
            put_f64(out, db.labels[i].x);
            put_f64(out, db.labels[i].y);
            put_f64(out, db.labels[i].z);
            for (Eigen::Index j = 0; j < db.features[i].size(); ++j)
                put_f64(out, db.features[i][j]);
        }
        return out;
    }

    FingerprintDb decode_fingerprints(std::span<const std::uint8_t> bytes)
    {
        Reader r(bytes);
        const auto magic = r.bytes(4);
        if (!std::equal(magic.begin(), magic.end(), std::begin(fpdb_magic)))
            throw DatasetError(DatasetErrorKind::bad_magic, "expected 'FPDB'");
        if (const auto v = r.le<std::uint8_t>(); v != fpdb_version)
            throw DatasetError(DatasetErrorKind::version_mismatch, "fingerprint database version " + std::to_string(v));
        FingerprintDb db;
        const auto mode = r.le<std::uint8_t>();
        if (mode > 2)
            throw DatasetError(DatasetErrorKind::malformed_row, "unknown feature mode " + std::to_string(mode));
        db.config.mode = static_cast<FeatureMode>(mode);
        db.antennas = r.le<std::uint16_t>();
        db.subcarriers = r.le<std::uint16_t>();
        const auto topo_len = r.le<std::uint16_t>();
        const auto topo = r.bytes(topo_len);
        db.topology.assign(topo.begin(), topo.end());
        const auto count = r.le<std::uint32_t>();
        const auto dim = r.le<std::uint32_t>();
        for (std::uint32_t i = 0; i < count; ++i)
        {
            Position3 p;
            p.x = r.f64();
            p.y = r.f64();
            p.z = r.f64();
            Eigen::VectorXd f(dim);
            for (std::uint32_t j = 0; j < dim; ++j)
                f[j] = r.f64();
            db.labels.push_back(p);
            db.features.push_back(std::move(f));
        }
        if (!r.done())
            throw DatasetError(DatasetErrorKind::size_mismatch, "trailing bytes after fingerprint records");
        return db;
    }

    void save_fingerprints(const std::filesystem::path &path, const FingerprintDb &db)
    {
        write_file_atomic(path, encode_fingerprints(db));
    }

    FingerprintDb load_fingerprints(const std::filesystem::path &path)
    {
        return decode_fingerprints(read_binary_file(path));
    }
}
