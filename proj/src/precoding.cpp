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

#include "csikit/precoding.hpp"
#include "csikit/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace csikit
{
    PrecodingScheme parse_precoding_scheme(std::string_view s)
    {
        if (s == "mrt" || s == "MRT")
            return PrecodingScheme::mrt;
        if (s == "zf" || s == "ZF")
            return PrecodingScheme::zf;
        throw std::invalid_argument("unknown precoding scheme '" + std::string(s) + "'");
    }

    void LinkBudget::validate() const
    {
        if (!(total_tx_power > 0.0) || !std::isfinite(total_tx_power))
            throw std::invalid_argument("link budget: transmit power must be positive");
        if (!(noise_power >= 0.0) || !std::isfinite(noise_power))
            throw std::invalid_argument("link budget: noise power must be nonnegative");
    }

    LinkBudget LinkBudget::from_radio(const RadioConfig &radio, double noise_power_dbm)
    {
        return {db_to_linear(radio.tx_power_dbm + radio.rx_gain_db), db_to_linear(noise_power_dbm)};
    }

    namespace
    {
        void check_group(std::span<const CsiMatrix> users)
        {
            if (users.empty())
                throw std::invalid_argument("precoding needs at least one user");
            const auto M = users[0].rows();
            const auto F = users[0].cols();
            if (M < 1 || F < 1)
                throw std::invalid_argument("empty channel matrix");
            for (const auto &h : users)
                if (h.rows() != M || h.cols() != F)
                    throw std::invalid_argument("channel dimensions differ across users");
        }
    }

    PrecodingWeights mrt_weights(const CsiMatrix &h)
    {
        return mrt_weights(std::span<const CsiMatrix>(&h, 1));
    }

    PrecodingWeights mrt_weights(std::span<const CsiMatrix> users)
    {
        check_group(users);
        PrecodingWeights out{PrecodingScheme::mrt, {}};
        for (const auto &h : users)
        {
            CsiMatrix w = h.conjugate();
            for (Eigen::Index k = 0; k < h.cols(); ++k)
            {
                const double n = h.col(k).norm();
                if (n == 0.0)
                    throw std::domain_error("MRT: zero channel on subcarrier " + std::to_string(k));
                w.col(k) /= n;
            }
            out.w.push_back(std::move(w));
        }
        return out;
    }

    PrecodingWeights zf_weights(std::span<const CsiMatrix> users)
    {
        check_group(users);
        const auto K = static_cast<Eigen::Index>(users.size());
        const auto M = users[0].rows();
        const auto F = users[0].cols();
        if (K > M)
            throw std::invalid_argument("ZF: " + std::to_string(K) + " users exceed " + std::to_string(M) +
                                        " antennas");

        PrecodingWeights out{PrecodingScheme::zf, std::vector<CsiMatrix>(users.size(), CsiMatrix(M, F))};
        Eigen::MatrixXcd Hh(M, K); // H^H, column u = conj(h_u,k)
        const Eigen::MatrixXcd identity = Eigen::MatrixXcd::Identity(K, K);
        for (Eigen::Index k = 0; k < F; ++k)
        {
            for (Eigen::Index u = 0; u < K; ++u)
                Hh.col(u) = users[static_cast<std::size_t>(u)].col(k).conjugate();

            // H^H P = Q R  =>  W = H^H (H H^H)^-1 = Q R^-H P^T
            Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(Hh);
            qr.setThreshold(1e-10);
            if (qr.rank() < K)
                throw std::domain_error("ZF: channel matrix is rank deficient on subcarrier " + std::to_string(k));
            const Eigen::MatrixXcd R = qr.matrixR().topLeftCorner(K, K).triangularView<Eigen::Upper>();
            const Eigen::MatrixXcd Q = qr.householderQ() * Eigen::MatrixXcd::Identity(M, K);
            const Eigen::MatrixXcd X = R.adjoint().triangularView<Eigen::Lower>().solve(identity);
            const Eigen::MatrixXcd W = Q * X * qr.colsPermutation().transpose();

            for (Eigen::Index u = 0; u < K; ++u)
                out.w[static_cast<std::size_t>(u)].col(k) = W.col(u) / W.col(u).norm();
        }
        return out;
    }

    PrecodingWeights compute_weights(PrecodingScheme scheme, std::span<const CsiMatrix> users)
    {
        return scheme == PrecodingScheme::mrt ? mrt_weights(users) : zf_weights(users);
    }

    ReceivedPower received_power(const CsiMatrix &h_eval, const PrecodingWeights &weights, const LinkBudget &budget)
    {
        budget.validate();
        if (weights.w.empty())
            throw std::invalid_argument("received power: no precoding weights");
        for (const auto &w : weights.w)
            if (w.rows() != h_eval.rows() || w.cols() != h_eval.cols())
                throw std::invalid_argument("received power: channel is " + std::to_string(h_eval.rows()) + "x" +
                                            std::to_string(h_eval.cols()) + ", weights are " +
                                            std::to_string(w.rows()) + "x" + std::to_string(w.cols()));
        const double p_user = budget.per_user(weights.users());
        ReceivedPower out;
        out.per_subcarrier.resize(static_cast<std::size_t>(h_eval.cols()));
        for (Eigen::Index k = 0; k < h_eval.cols(); ++k)
        {
            double p = 0.0;
            for (const auto &w : weights.w)
                p += p_user * std::norm(h_eval.col(k).cwiseProduct(w.col(k)).sum());
            out.per_subcarrier[static_cast<std::size_t>(k)] = p;
        }
        out.total = std::accumulate(out.per_subcarrier.begin(), out.per_subcarrier.end(), 0.0) /
                    static_cast<double>(out.per_subcarrier.size());
        return out;
    }

    GroupSpectralEfficiency group_spectral_efficiency(std::span<const CsiMatrix> group, PrecodingScheme scheme,
                                                      const LinkBudget &budget)
    {
        budget.validate();
        const auto weights = compute_weights(scheme, group);
        const auto K = group.size();
        const auto F = group[0].cols();
        const double p = budget.per_user(K);

        GroupSpectralEfficiency out;
        out.per_user.assign(K, 0.0);
        for (Eigen::Index f = 0; f < F; ++f)
            for (std::size_t k = 0; k < K; ++k)
            {
                const auto h = group[k].col(f);
                double signal = 0.0;
                double interference = 0.0;
                for (std::size_t j = 0; j < K; ++j)
                {
                    const double g = p * std::norm(h.cwiseProduct(weights.w[j].col(f)).sum());
                    (j == k ? signal : interference) += g;
                }
                const double denom = budget.noise_power + interference;
                const double sinr = denom > 0.0 ? signal / denom : std::numeric_limits<double>::infinity();
                out.per_user[k] += std::log2(1.0 + sinr);
            }
        for (auto &se : out.per_user)
        {
            se /= static_cast<double>(F);
            out.sum += se;
        }
        return out;
    }

    ServedUsersResult max_served_users(std::span<const CsiSample> pool, double tau, int trials, std::uint64_t seed,
                                       const LinkBudget &budget)
    {
        if (pool.empty())
            throw std::invalid_argument("served users: empty user pool");
        if (!(tau > 0.0))
            throw std::invalid_argument("served users: SE threshold must be positive");
        if (trials < 1)
            throw std::invalid_argument("served users: need at least one trial");
        budget.validate();

        const auto M = static_cast<std::size_t>(pool[0].antennas());
        const auto limit = std::min(pool.size(), M);

        ServedUsersResult out;
        std::vector<std::size_t> order(pool.size());
        for (int t = 0; t < trials; ++t)
        {
            std::iota(order.begin(), order.end(), std::size_t{0});
            Rng rng(mix_seed(seed, static_cast<std::uint64_t>(t)));
            rng.shuffle(std::span(order));

            std::vector<CsiMatrix> group;
            std::size_t served = 0;
            while (served < limit)
            {
                group.push_back(pool[order[served]].h);
                bool feasible = true;
                try
                {
                    const auto se = group_spectral_efficiency(group, PrecodingScheme::zf, budget);
                    feasible = std::all_of(se.per_user.begin(), se.per_user.end(),
                                           [tau](double v) { return v >= tau; });
                }
                catch (const std::domain_error &)
                {
                    feasible = false;
                }
                if (!feasible)
                    break;
                ++served;
            }
            out.per_trial.push_back(served);
        }
        auto sorted = out.per_trial;
        std::sort(sorted.begin(), sorted.end());
        out.median = sorted[(sorted.size() - 1) / 2];
        return out;
    }
}
