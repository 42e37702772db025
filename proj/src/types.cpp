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

#include "csikit/types.hpp"

#include <cmath>
#include <stdexcept>

namespace csikit
{
    double Position3::norm() const { return std::sqrt(x * x + y * y + z * z); }

    bool Position3::is_finite() const
    {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }

    double distance_mm(const Position3 &a, const Position3 &b) { return (a - b).norm(); }

    double planar_distance_mm(const Position3 &a, const Position3 &b)
    {
        return std::hypot(a.x - b.x, a.y - b.y);
    }

    void RadioConfig::validate() const
    {
        if (!(carrier_hz > 0.0) || !(subcarrier_spacing_hz > 0.0) || !(symbol_duration_s > 0.0))
            throw std::invalid_argument("radio config: frequencies and symbol duration must be positive");
        if (total_subcarriers <= 0 || pilot_count <= 0 || interleave_factor <= 0)
            throw std::invalid_argument("radio config: subcarrier counts must be positive");
        if (pilot_count * interleave_factor != total_subcarriers)
            throw std::invalid_argument("radio config: pilot_count * interleave_factor must equal total_subcarriers");
        if (!std::isfinite(tx_power_dbm) || !std::isfinite(rx_gain_db))
            throw std::invalid_argument("radio config: power levels must be finite");
    }

    CsiSample::CsiSample(CsiMatrix h_, int user, std::optional<Position3> label_, std::string id)
        : h(std::move(h_)), label(label_), user_id(user), sample_id(std::move(id))
    {
    }

    void CsiSample::validate() const
    {
        if (h.rows() < 1 || h.cols() < 1)
            throw std::invalid_argument("CSI sample must have at least one antenna and one subcarrier");
        if (user_id < 0 || user_id >= max_users)
            throw std::invalid_argument("CSI sample user_id out of range [0, 12): " + std::to_string(user_id));
        if (!h.allFinite())
            throw std::invalid_argument("CSI sample contains non-finite entries");
        if (label && !label->is_finite())
            throw std::invalid_argument("CSI sample label is not finite");
        if (!sample_id.empty() && !is_valid_sample_id(sample_id))
            throw std::invalid_argument("invalid sample id '" + sample_id + "'");
    }

    bool is_sample_id_char(char c)
    {
        return (c >= '0' && c <= '9') || (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_' ||
               c == '-';
    }

    bool is_valid_sample_id(std::string_view id)
    {
        if (id.size() != sample_id_length)
            return false;
        for (char c : id)
            if (!is_sample_id_char(c))
                return false;
        return true;
    }

    std::string format_sample_id(std::uint64_t counter)
    {
        if (counter > 999999)
            throw std::out_of_range("sample counter exceeds six decimal digits");
        std::string s = std::to_string(counter);
        return std::string(sample_id_length - s.size(), '0') + s;
    }

    double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
    double linear_to_db(double linear) { return 10.0 * std::log10(linear); }
}
