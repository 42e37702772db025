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

#include "csikit/channel.hpp"
#include "csikit/rng.hpp"
#include "csikit/text.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace csikit
{
    namespace
    {
        constexpr double two_pi = 2.0 * std::numbers::pi;

        // lambda / (4 pi d) * exp(-i 2 pi f d / c), d in metres
        Complex propagation(double f_hz, double d_m)
        {
            const double lambda = speed_of_light / f_hz;
            // Reduce the path to whole wavelengths before taking the phase so long
            // paths keep full phase precision
            const double cycles = d_m / lambda;
            const double frac = cycles - std::floor(cycles);
            return std::polar(lambda / (4.0 * std::numbers::pi * d_m), -two_pi * frac);
        }

        void check_user(int user_id, const RadioConfig &radio)
        {
            if (user_id < 0 || user_id >= radio.interleave_factor || user_id >= max_users)
                throw std::invalid_argument("user_id out of range: " + std::to_string(user_id));
        }
    }

    void ChannelConfig::validate() const
    {
        if (!(pattern_exponent >= 0.0) || !std::isfinite(pattern_exponent))
            throw std::invalid_argument("pattern exponent must be finite and nonnegative");
    }

    std::vector<double> pilot_frequencies(const RadioConfig &radio, int user_id)
    {
        radio.validate();
        if (user_id < 0 || user_id >= radio.interleave_factor)
            throw std::invalid_argument("user_id out of range: " + std::to_string(user_id));
        std::vector<double> f(static_cast<std::size_t>(radio.pilot_count));
        const int half = radio.total_subcarriers / 2;
        for (int k = 0; k < radio.pilot_count; ++k)
        {
            const int slot = radio.interleave_factor * k + user_id - half;
            f[static_cast<std::size_t>(k)] = radio.carrier_hz + slot * radio.subcarrier_spacing_hz;
        }
        return f;
    }

    double element_gain(const ArrayElement &element, const Position3 &target, double pattern_exponent)
    {
        if (pattern_exponent == 0.0)
            return 1.0;
        const Position3 v = target - element.position;
        const double cos_theta = element.facing.dot(v) / v.norm();
        return std::pow(std::max(0.0, cos_theta), pattern_exponent);
    }

    CsiSample los_channel(const ArrayGeometry &geom, const Position3 &user, const RadioConfig &radio,
                          const ChannelConfig &cfg, int user_id)
    {
        ChannelConfig direct = cfg;
        direct.rician_enabled = true;
        return multipath_channel(geom, user, radio, direct, {}, user_id);
    }

    CsiSample multipath_channel(const ArrayGeometry &geom, const Position3 &user, const RadioConfig &radio,
                                const ChannelConfig &cfg, std::span<const Scatterer> scatterers, int user_id)
    {
        cfg.validate();
        check_user(user_id, radio);
        if (geom.elements.empty())
            throw std::invalid_argument("array geometry has no elements");
        if (!user.is_finite())
            throw std::invalid_argument("user position must be finite");
        const auto freqs = pilot_frequencies(radio, user_id);
        const auto M = static_cast<Eigen::Index>(geom.size());
        const auto F = static_cast<Eigen::Index>(freqs.size());

        for (const auto &s : scatterers)
        {
            if (std::abs(s.reflection) > 1.0)
                throw std::invalid_argument("scatterer reflection coefficient exceeds unit magnitude");
            if (distance_mm(s.position, user) == 0.0)
                throw std::invalid_argument("scatterer coincides with the user");
        }

        CsiMatrix h(M, F);
        for (Eigen::Index m = 0; m < M; ++m)
        {
            const auto &el = geom.elements[static_cast<std::size_t>(m)];
            const double d_m = distance_mm(el.position, user) / 1000.0;
            if (d_m == 0.0)
                throw std::invalid_argument("user coincides with array element " + std::to_string(m));
            const double g = element_gain(el, user, cfg.pattern_exponent);
            for (Eigen::Index k = 0; k < F; ++k)
                h(m, k) = cfg.rician_enabled ? g * propagation(freqs[static_cast<std::size_t>(k)], d_m) : Complex{};

            for (const auto &s : scatterers)
            {
                if (s.reflection == Complex{0.0, 0.0})
                    continue;
                const double d1 = distance_mm(el.position, s.position) / 1000.0;
                if (d1 == 0.0)
                    throw std::invalid_argument("scatterer coincides with array element " + std::to_string(m));
                const double d2 = distance_mm(s.position, user) / 1000.0;
                for (Eigen::Index k = 0; k < F; ++k)
                    h(m, k) += s.reflection * propagation(freqs[static_cast<std::size_t>(k)], d1 + d2);
            }
        }
        return CsiSample(std::move(h), user_id, user);
    }

    CsiSample add_noise(const CsiSample &csi, const NoiseSpec &spec)
    {
        if (!csi.h.allFinite())
            throw std::invalid_argument("cannot add noise to a non-finite channel");
        if (std::isinf(spec.snr_db) && spec.snr_db > 0.0)
            return csi;
        const double entries = static_cast<double>(csi.h.size());
        const double variance = csi.h.squaredNorm() / entries * std::pow(10.0, -spec.snr_db / 10.0);
        const double sd = std::sqrt(variance / 2.0);
        Rng rng(spec.seed);
        CsiSample out = csi;
        for (Eigen::Index k = 0; k < out.h.cols(); ++k)
            for (Eigen::Index m = 0; m < out.h.rows(); ++m)
            {
                const double re = rng.normal();
                const double im = rng.normal();
                out.h(m, k) += Complex{sd * re, sd * im};
            }
        return out;
    }

    std::vector<Scatterer> parse_scatterers_csv(std::string_view content)
    {
        std::vector<Scatterer> out;
        int line_no = 0;
        for (auto line : text::split(content, '\n'))
        {
            ++line_no;
            line = text::trim(line);
            if (line.empty() || line.front() == '#')
                continue;
            const auto cols = text::split(line, ',');
            if (cols.size() != 5)
                throw std::invalid_argument("scatterer CSV line " + std::to_string(line_no) + ": expected 5 columns");
            if (text::trim(cols[0]) == "x_mm")
                continue;
            Scatterer s;
            s.position = {text::parse_number(cols[0], "x_mm"), text::parse_number(cols[1], "y_mm"),
                          text::parse_number(cols[2], "z_mm")};
            s.reflection = {text::parse_number(cols[3], "gamma_re"), text::parse_number(cols[4], "gamma_im")};
            if (std::abs(s.reflection) > 1.0)
                throw std::invalid_argument("scatterer CSV line " + std::to_string(line_no) + ": |gamma| > 1");
            out.push_back(s);
        }
        return out;
    }

    std::vector<Scatterer> load_scatterers_csv(const std::filesystem::path &path)
    {
        return parse_scatterers_csv(text::read_file(path));
    }
}
