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

#include "csikit/campaign.hpp"
#include "csikit/channel.hpp"
#include "csikit/cli.hpp"
#include "csikit/dataset.hpp"
#include "csikit/localization.hpp"
#include "csikit/precoding.hpp"
#include "csikit/scheduling.hpp"
#include "csikit/topology.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

namespace py = pybind11;
using namespace py::literals;

namespace
{
    using csikit::CsiMatrix;
    using csikit::Position3;

    Position3 to_position(const std::vector<double> &v)
    {
        if (v.size() != 3)
            throw std::invalid_argument("position must have three coordinates (mm)");
        return {v[0], v[1], v[2]};
    }

    std::vector<double> from_position(const Position3 &p) { return {p.x, p.y, p.z}; }

    csikit::LinkBudget budget(double tx_power, double noise_power)
    {
        csikit::LinkBudget b{tx_power, noise_power};
        b.validate();
        return b;
    }

    Eigen::MatrixXd element_table(const csikit::ArrayGeometry &g)
    {
        Eigen::MatrixXd out(static_cast<Eigen::Index>(g.size()), 6);
        for (std::size_t i = 0; i < g.size(); ++i)
        {
            const auto &e = g.elements[i];
            out.row(static_cast<Eigen::Index>(i)) << e.position.x, e.position.y, e.position.z, e.facing.x,
                e.facing.y, e.facing.z;
        }
        return out;
    }

    csikit::ArrayGeometry geometry(const std::string &kind)
    {
        csikit::SiteLayout site;
        csikit::TopologyParams params;
        params.da_centre = site.roi_centre();
        return csikit::build_topology(csikit::parse_topology_kind(kind), params);
    }

    std::vector<CsiMatrix> weights_of(const csikit::PrecodingWeights &w) { return w.w; }

    csikit::UserPool pool_of(const std::vector<CsiMatrix> &channels, const std::vector<std::vector<double>> &positions)
    {
        if (!positions.empty() && positions.size() != channels.size())
            throw std::invalid_argument("positions and channels differ in length");
        csikit::UserPool pool;
        for (std::size_t i = 0; i < channels.size(); ++i)
            pool.users.push_back({static_cast<int>(i), csikit::CsiSample(channels[i], 0),
                                  positions.empty() ? Position3{} : to_position(positions[i])});
        return pool;
    }
}

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Massive MIMO CSI toolkit";

    py::register_exception<csikit::DatasetError>(m, "DatasetError", PyExc_ValueError);

    m.def(
        "topology",
        [](const std::string &kind) { return element_table(geometry(kind)); },
        "kind"_a, "Element table (x, y, z, nx, ny, nz) in mm for 'ura', 'ula' or 'da'");

    m.def(
        "pilot_frequencies",
        [](int user_id) { return csikit::pilot_frequencies(csikit::RadioConfig{}, user_id); }, "user_id"_a = 0);

    m.def(
        "los_channel",
        [](const std::string &kind, const std::vector<double> &position, int user_id, double pattern_exponent,
           double snr_db, std::uint64_t seed) {
            csikit::ChannelConfig cfg;
            cfg.pattern_exponent = pattern_exponent;
            auto csi = csikit::los_channel(geometry(kind), to_position(position), csikit::RadioConfig{}, cfg, user_id);
            return csikit::add_noise(csi, {snr_db, seed}).h;
        },
        "kind"_a, "position"_a, "user_id"_a = 0, "pattern_exponent"_a = 0.0,
        "snr_db"_a = std::numeric_limits<double>::infinity(), "seed"_a = 0,
        "Free-space CSI, antennas by pilot subcarriers");

    m.def(
        "write_sample",
        [](const std::filesystem::path &path, const CsiMatrix &h, int user_id) {
            return csikit::write_sample(path, csikit::CsiSample(h, user_id));
        },
        "path"_a, "h"_a, "user_id"_a = 0);
    m.def(
        "read_sample", [](const std::filesystem::path &path) { return csikit::read_sample(path).h; }, "path"_a);

    m.def(
        "mrt_weights", [](const std::vector<CsiMatrix> &users) { return weights_of(csikit::mrt_weights(users)); },
        "channels"_a);
    m.def(
        "zf_weights", [](const std::vector<CsiMatrix> &users) { return weights_of(csikit::zf_weights(users)); },
        "channels"_a);

    m.def(
        "received_power",
        [](const CsiMatrix &h, const std::vector<CsiMatrix> &channels, const std::string &scheme, double tx_power,
           double noise_power) {
            const auto w = csikit::compute_weights(csikit::parse_precoding_scheme(scheme), channels);
            return csikit::received_power(h, w, budget(tx_power, noise_power)).total;
        },
        "h"_a, "channels"_a, "scheme"_a = "mrt", "tx_power"_a = 1.0, "noise_power"_a = 1.0);

    m.def(
        "group_spectral_efficiency",
        [](const std::vector<CsiMatrix> &group, const std::string &scheme, double tx_power, double noise_power) {
            return csikit::group_spectral_efficiency(group, csikit::parse_precoding_scheme(scheme),
                                                     budget(tx_power, noise_power))
                .per_user;
        },
        "channels"_a, "scheme"_a = "zf", "tx_power"_a = 1.0, "noise_power"_a = 1.0);

    m.def(
        "max_served_users",
        [](const std::vector<CsiMatrix> &channels, double tau, int trials, std::uint64_t seed, double tx_power,
           double noise_power) {
            std::vector<csikit::CsiSample> pool;
            for (const auto &h : channels)
                pool.emplace_back(h, 0);
            return csikit::max_served_users(pool, tau, trials, seed, budget(tx_power, noise_power)).median;
        },
        "channels"_a, "tau"_a = 1.0, "trials"_a = 5, "seed"_a = 1, "tx_power"_a = 1.0, "noise_power"_a = 1.0);

    m.def(
        "sus_select",
        [](const std::vector<CsiMatrix> &channels, double alpha, std::size_t max_users) {
            return csikit::sus_select(pool_of(channels, {}), alpha, max_users);
        },
        "channels"_a, "alpha"_a = 0.3, "max_users"_a = 0);
    m.def(
        "def_schedule",
        [](const std::vector<std::vector<double>> &positions, std::size_t group_size) {
            std::vector<Position3> p;
            for (const auto &v : positions)
                p.push_back(to_position(v));
            return csikit::def_assign(p, csikit::flock_order(p), group_size).groups;
        },
        "positions"_a, "group_size"_a);
    m.def(
        "random_schedule",
        [](std::size_t users, std::size_t group_size, std::uint64_t seed) {
            return csikit::random_schedule(users, group_size, seed).groups;
        },
        "users"_a, "group_size"_a, "seed"_a);

    m.def(
        "extract_features",
        [](const CsiMatrix &h, const std::string &mode) {
            return csikit::extract_features(csikit::CsiSample(h, 0), {csikit::parse_feature_mode(mode)});
        },
        "h"_a, "mode"_a = "raw");
    m.def(
        "leave_one_out",
        [](const std::vector<CsiMatrix> &channels, const std::vector<std::vector<double>> &labels, std::size_t k) {
            if (labels.size() != channels.size())
                throw std::invalid_argument("labels and channels differ in length");
            std::vector<csikit::CsiSample> samples;
            for (std::size_t i = 0; i < channels.size(); ++i)
                samples.emplace_back(channels[i], 0, to_position(labels[i]));
            csikit::KnnOptions o;
            o.k = k;
            const auto r = csikit::leave_one_out(csikit::build_fingerprints(samples), o);
            return py::dict("mean_mm"_a = r.mean_mm, "median_mm"_a = r.median_mm, "p95_mm"_a = r.p95_mm,
                            "errors_mm"_a = r.errors_mm);
        },
        "channels"_a, "labels"_a, "k"_a = 4);

    m.def(
        "campaign_plan",
        [](double resolution_mm, const std::vector<int> &positioners, const std::string &pattern) {
            const auto plan = csikit::plan_campaign(csikit::SiteLayout{}, positioners, resolution_mm,
                                                    csikit::parse_traversal(pattern));
            py::list tracks;
            for (const auto &t : plan.tracks)
            {
                py::list pts;
                for (const auto &w : t.waypoints)
                    pts.append(from_position(w));
                tracks.append(pts);
            }
            return py::dict("total_waypoints"_a = plan.total_waypoints(), "rounds"_a = plan.rounds(),
                            "duration_s"_a = plan.duration_estimate_s(), "waypoints"_a = tracks);
        },
        "resolution_mm"_a = 5.0, "positioners"_a = std::vector<int>{0, 1, 2, 3}, "pattern"_a = "serpentine");

    m.def(
        "run_cli",
        [](const std::vector<std::string> &args) {
            std::ostringstream out, err;
            int rc = 0;
            {
                py::gil_scoped_release release;
                rc = csikit::run_cli(args, out, err);
            }
            return py::make_tuple(rc, out.str(), err.str());
        },
        "args"_a, "Run a csikit subcommand in-process; returns (exit_code, stdout, stderr)");
}
