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

#ifndef CSIKIT_TYPES_HPP
#define CSIKIT_TYPES_HPP

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace csikit
{
    using Complex = std::complex<double>;

    // Channel matrix, rows = BS antennas, columns = pilot subcarriers
    using CsiMatrix = Eigen::MatrixXcd;

    inline constexpr double speed_of_light = 299792458.0; // m/s
    inline constexpr int max_users = 12;
    inline constexpr std::size_t sample_id_length = 6;

    // Point in the local frame, millimetres. The origin sits at the centre of the URA
    // footprint; the URA plane is y = 0 and the ROI extends into +y. z is height above floor.
    struct Position3
    {
        double x = 0.0;
        double y = 0.0;
        double z = 0.0;

        friend bool operator==(const Position3 &, const Position3 &) = default;

        Position3 operator+(const Position3 &o) const { return {x + o.x, y + o.y, z + o.z}; }
        Position3 operator-(const Position3 &o) const { return {x - o.x, y - o.y, z - o.z}; }
        Position3 operator*(double s) const { return {x * s, y * s, z * s}; }

        double dot(const Position3 &o) const { return x * o.x + y * o.y + z * o.z; }
        double norm() const;
        bool is_finite() const;
    };

    double distance_mm(const Position3 &a, const Position3 &b);

    // Planar (xy) distance, used by location-based scheduling
    double planar_distance_mm(const Position3 &a, const Position3 &b);

    // LTE numerology 0 frame as used by the testbed
    struct RadioConfig
    {
        double carrier_hz = 2.61e9;
        double subcarrier_spacing_hz = 15e3;
        int total_subcarriers = 1200;
        int pilot_count = 100;
        int interleave_factor = 12;
        double tx_power_dbm = 18.5;
        double rx_gain_db = 15.0;
        double symbol_duration_s = 7.1e-6;

        // Throws std::invalid_argument when an invariant is broken
        void validate() const;

        friend bool operator==(const RadioConfig &, const RadioConfig &) = default;
    };

    // One CSI snapshot of one user: M antennas by F subcarriers
    struct CsiSample
    {
        CsiMatrix h;
        std::optional<Position3> label;
        int user_id = 0;
        std::string sample_id;

        CsiSample() = default;
        CsiSample(CsiMatrix h_, int user, std::optional<Position3> label_ = std::nullopt,
                  std::string id = {});

        Eigen::Index antennas() const { return h.rows(); }
        Eigen::Index subcarriers() const { return h.cols(); }

        // Checks dimensions, user range, finiteness and the sample id charset
        void validate() const;
    };

    // [0-9A-Za-z_-], exactly six bytes
    bool is_valid_sample_id(std::string_view id);
    bool is_sample_id_char(char c);

    // Zero-padded decimal counter, "000042"
    std::string format_sample_id(std::uint64_t counter);

    double db_to_linear(double db);
    double linear_to_db(double linear);
}

#endif
