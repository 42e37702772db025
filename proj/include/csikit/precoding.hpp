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

#ifndef CSIKIT_PRECODING_HPP
#define CSIKIT_PRECODING_HPP

#include "csikit/types.hpp"

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace csikit
{
    enum class PrecodingScheme
    {
        mrt,
        zf
    };

    PrecodingScheme parse_precoding_scheme(std::string_view s);

    // One M x F matrix per scheduled user; column k is the unit-norm beamformer on subcarrier k.
    // The received amplitude of a user with channel h is h_k^T w_k (no conjugation).
    struct PrecodingWeights
    {
        PrecodingScheme scheme = PrecodingScheme::mrt;
        std::vector<CsiMatrix> w;

        std::size_t users() const { return w.size(); }
    };

    // Transmit power and receiver noise in linear units (mW), split equally across users
    struct LinkBudget
    {
        double total_tx_power = 1.0;
        double noise_power = 1.0;

        double per_user(std::size_t users) const { return total_tx_power / static_cast<double>(users); }
        void validate() const;

        // tx power plus receive gain against a noise floor given per subcarrier
        static LinkBudget from_radio(const RadioConfig &radio, double noise_power_dbm);
    };

    // w_k = conj(h_k) / ||h_k||
    PrecodingWeights mrt_weights(const CsiMatrix &h);

    // Per user MRT, for groups precoded without interference suppression
    PrecodingWeights mrt_weights(std::span<const CsiMatrix> users);

    // Columns of H^H (H H^H)^-1 with unit norm, H stacking h_u,k^T as rows. Computed from a
    // column-pivoted QR of H^H; throws std::domain_error naming the first rank-deficient subcarrier.
    PrecodingWeights zf_weights(std::span<const CsiMatrix> users);

    PrecodingWeights compute_weights(PrecodingScheme scheme, std::span<const CsiMatrix> users);

    struct ReceivedPower
    {
        std::vector<double> per_subcarrier;
        double total = 0.0; // mean over subcarriers
    };

    // P_k = sum_u P_user |h_eval,k^T w_u,k|^2, P_user = total / users
    ReceivedPower received_power(const CsiMatrix &h_eval, const PrecodingWeights &weights, const LinkBudget &budget);

    struct GroupSpectralEfficiency
    {
        std::vector<double> per_user; // bits/s/Hz, mean of log2(1 + SINR) over subcarriers
        double sum = 0.0;
    };

    GroupSpectralEfficiency group_spectral_efficiency(std::span<const CsiMatrix> group, PrecodingScheme scheme,
                                                      const LinkBudget &budget);

    struct ServedUsersResult
    {
        std::size_t median = 0;            // lower median over trials
        std::vector<std::size_t> per_trial;
    };

    // Per trial: draw users uniformly without replacement, one at a time, until some user's ZF SE
    // drops below tau (or the group cannot be zero-forced). The count is the last feasible size.
    ServedUsersResult max_served_users(std::span<const CsiSample> pool, double tau, int trials, std::uint64_t seed,
                                       const LinkBudget &budget);
}

#endif
