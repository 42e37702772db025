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

#ifndef CSIKIT_LOCALIZATION_HPP
#define CSIKIT_LOCALIZATION_HPP

#include "csikit/dataset.hpp"
#include "csikit/types.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace csikit
{
    enum class FeatureMode : std::uint8_t
    {
        raw_unit_norm = 0,                  // re/im of every entry, divided by ||h||_F
        magnitude_only = 1,                 // |h|, unit-normalised
        phase_relative_to_first_antenna = 2 // arg h[m][k] - arg h[0][k], wrapped to (-pi, pi]
    };

    FeatureMode parse_feature_mode(std::string_view s);
    std::string to_string(FeatureMode mode);

    struct FeatureConfig
    {
        FeatureMode mode = FeatureMode::raw_unit_norm;
    };

    Eigen::VectorXd extract_features(const CsiSample &csi, const FeatureConfig &cfg = {});

    struct FingerprintDb
    {
        FeatureConfig config;
        std::string topology;
        Eigen::Index antennas = 0;
        Eigen::Index subcarriers = 0;
        std::vector<Eigen::VectorXd> features;
        std::vector<Position3> labels;

        std::size_t size() const { return labels.size(); }
        bool empty() const { return labels.empty(); }

        // Appends one labelled sample; throws if the sample has no label or other dimensions
        void add(const CsiSample &csi);
    };

    // Order-preserving; reads the stream once
    FingerprintDb build_fingerprints(const SampleStream &stream, const FeatureConfig &cfg = {},
                                     std::string topology = {});
    FingerprintDb build_fingerprints(std::span<const CsiSample> samples, const FeatureConfig &cfg = {},
                                     std::string topology = {});

    enum class KnnWeighting
    {
        uniform,
        inverse_distance
    };

    KnnWeighting parse_knn_weighting(std::string_view s);

    // CSI in, position out. The kNN matcher below is one implementation; a learned
    // regressor fits the same slot.
    class Localizer
    {
    public:
        virtual ~Localizer() = default;
        virtual Position3 locate(const CsiSample &csi) const = 0;
    };

    struct KnnOptions
    {
        std::size_t k = 5;
        KnnWeighting weighting = KnnWeighting::inverse_distance;
        double epsilon = 1e-12; // inverse-distance guard
    };

    // Euclidean distance in feature space; ties keep database order
    Position3 knn_locate(const FingerprintDb &db, const CsiSample &query, const KnnOptions &options = {});
    Position3 knn_locate(const FingerprintDb &db, const Eigen::VectorXd &query_features, const KnnOptions &options,
                         std::ptrdiff_t exclude = -1);

    class KnnLocalizer final : public Localizer
    {
    public:
        KnnLocalizer(const FingerprintDb &db, KnnOptions options) : db_(db), options_(options) {}
        Position3 locate(const CsiSample &csi) const override { return knn_locate(db_, csi, options_); }

    private:
        const FingerprintDb &db_;
        KnnOptions options_;
    };

    struct LocalizationReport
    {
        std::vector<std::string> sample_ids;
        std::vector<double> errors_mm;
        double mean_mm = 0.0;
        double median_mm = 0.0;
        double p95_mm = 0.0; // nearest-rank

        void summarize();
    };

    LocalizationReport evaluate_localizer(const Localizer &localizer, std::span<const CsiSample> test_set);
    LocalizationReport evaluate_localizer(const FingerprintDb &db, std::span<const CsiSample> test_set,
                                          const KnnOptions &options);

    // Each entry is located against the rest of the database
    LocalizationReport leave_one_out(const FingerprintDb &db, const KnnOptions &options);

    // CSV `sample_id,err_mm`
    std::string format_report_csv(const LocalizationReport &report);

    // Sample container with an "FPDB" magic:
    //   "FPDB" | u8 version = 1 | u8 feature mode | u16 M | u16 F | u16 topology length
    //   topology bytes | u32 count | u32 dim | count x (3 f64 label, dim f64 features)
    std::vector<std::uint8_t> encode_fingerprints(const FingerprintDb &db);
    FingerprintDb decode_fingerprints(std::span<const std::uint8_t> bytes);
    void save_fingerprints(const std::filesystem::path &path, const FingerprintDb &db);
    FingerprintDb load_fingerprints(const std::filesystem::path &path);
}

#endif
