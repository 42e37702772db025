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

#ifndef CSIKIT_CHANNEL_HPP
#define CSIKIT_CHANNEL_HPP

#include "csikit/topology.hpp"
#include "csikit/types.hpp"

#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

namespace csikit
{
    struct ChannelConfig
    {
        double pattern_exponent = 0.0; // element gain max(0, cos theta)^q, 0 = isotropic
        bool rician_enabled = true;    // false drops the direct path from multipath_channel (blocked LoS)
        void validate() const;
    };

    struct Scatterer
    {
        Position3 position;
        Complex reflection{0.0, 0.0}; // |gamma| <= 1
    };

    struct NoiseSpec
    {
        double snr_db = std::numeric_limits<double>::infinity(); // +inf disables noise
        std::uint64_t seed = 0;
    };

    // f_k = carrier + (interleave * k + user - total / 2) * spacing, k = 0 .. pilot_count-1
    std::vector<double> pilot_frequencies(const RadioConfig &radio, int user_id);

    // Free-space line of sight:
    //   h[m][k] = g_m * lambda_k / (4 pi d_m) * exp(-i 2 pi f_k d_m / c)
    // with d_m in metres. The returned sample is labelled with `user`.
    CsiSample los_channel(const ArrayGeometry &geom, const Position3 &user, const RadioConfig &radio,
                          const ChannelConfig &cfg, int user_id);

    // LoS plus one single-bounce term per scatterer
    CsiSample multipath_channel(const ArrayGeometry &geom, const Position3 &user, const RadioConfig &radio,
                                const ChannelConfig &cfg, std::span<const Scatterer> scatterers, int user_id);

    // Circularly symmetric Gaussian noise, per-entry variance ||h||_F^2 / (M F) * 10^(-snr/10)
    CsiSample add_noise(const CsiSample &csi, const NoiseSpec &spec);

    double element_gain(const ArrayElement &element, const Position3 &target, double pattern_exponent);

    // CSV `x_mm,y_mm,z_mm,gamma_re,gamma_im`, optional header
    std::vector<Scatterer> parse_scatterers_csv(std::string_view content);
    std::vector<Scatterer> load_scatterers_csv(const std::filesystem::path &path);
}

#endif
