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

#ifndef CSIKIT_CAPTURE_HPP
#define CSIKIT_CAPTURE_HPP

#include "csikit/campaign.hpp"
#include "csikit/channel.hpp"
#include "csikit/dataset.hpp"
#include "csikit/grid.hpp"
#include "csikit/net.hpp"
#include "csikit/topology.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <stop_token>
#include <string>
#include <vector>

namespace csikit
{
    inline constexpr std::uint8_t trigger_ack = 0x06;
    inline constexpr std::uint8_t trigger_nak = 0x15;

    // Simulated lab: up to four positioner tables, each carrying one user antenna, in front
    // of one BS array. All members are guarded by one mutex; the capture service and the
    // positioner server may run on different threads.
    class VirtualTestbed
    {
    public:
        struct Options
        {
            ArrayGeometry geometry;
            RadioConfig radio;
            ChannelConfig channel;
            std::vector<Scatterer> scatterers;
            SiteLayout site;
            std::array<int, 4> user_of_positioner{0, 1, 2, 3};
            double snr_db = std::numeric_limits<double>::infinity();
            std::uint64_t seed = 0;
            // Uniform per-axis placement error, bounded by the table's accuracy (0 = exact)
            double position_error_mm = 0.0;
        };

        explicit VirtualTestbed(Options options);

        // Runs one positioner command. "T<n>\n" selects table n for the connection and marks
        // its user as the one the next capture records.
        std::string execute(int &selected, std::string_view command);

        // Convenience for in-process callers: selects `positioner` then runs `command`
        std::string execute_on(int positioner, std::string_view command);

        struct ActiveUser
        {
            int positioner_id = 0;
            int user_id = 0;
            Position3 commanded; // global frame
            Position3 actual;    // commanded plus injected placement error
        };

        ActiveUser active_user() const;
        PositionerState positioner(int id) const;
        const Options &options() const { return options_; }

    private:
        Options options_;
        mutable std::mutex mutex_;
        std::array<PositionerState, 4> tables_{};
        std::array<Position3, 4> error_{};
        std::uint64_t move_counter_ = 0;
        int active_ = 0;
    };

    // Produces the CSI the BS would report right now
    class ChannelSource
    {
    public:
        virtual ~ChannelSource() = default;
        // sample_id lets stochastic sources seed per capture, so re-triggers reproduce
        virtual CsiSample snapshot(std::string_view sample_id) = 0;
    };

    // Synthetic channel of the active user at its actual position
    class SyntheticSource final : public ChannelSource
    {
    public:
        explicit SyntheticSource(const VirtualTestbed &testbed) : testbed_(testbed) {}
        CsiSample snapshot(std::string_view sample_id) override;

    private:
        const VirtualTestbed &testbed_;
    };

    // Replays recorded samples: returns the sample labelled with the active user's commanded position
    class ReplaySource final : public ChannelSource
    {
    public:
        ReplaySource(const VirtualTestbed &testbed, DatasetIndex index);
        CsiSample snapshot(std::string_view sample_id) override;

    private:
        const VirtualTestbed &testbed_;
        DatasetIndex index_;
    };

    struct CaptureRecord
    {
        std::string sample_id;
        int user_id = 0;
        Position3 label;
    };

    // TCP capture trigger: per connection, read exactly six bytes, snapshot the channel,
    // write <payload>.bin, answer one byte (ACK 0x06 / NAK 0x15). Requests are served one at a
    // time in arrival order.
    class CaptureService
    {
    public:
        using Writer = std::function<std::size_t(const std::filesystem::path &, const CsiSample &)>;

        struct Options
        {
            net::Millis read_timeout{2000};
            Writer writer; // defaults to write_sample
        };

        CaptureService(const net::Endpoint &listen, std::filesystem::path output_dir, ChannelSource &source,
                       Options options);
        CaptureService(const net::Endpoint &listen, std::filesystem::path output_dir, ChannelSource &source)
            : CaptureService(listen, std::move(output_dir), source, Options{})
        {
        }

        const net::Endpoint &endpoint() const { return listener_.endpoint(); }

        // Accept loop; returns once stop is requested (checked every poll interval)
        void serve(std::stop_token stop, std::size_t max_requests = 0);

        // Handles one payload as if it arrived over TCP; returns the reply byte
        std::uint8_t handle(std::string_view payload);

        // Captures in arrival order; a re-triggered id keeps its first slot
        std::vector<CaptureRecord> captures() const;
        std::size_t requests_handled() const;

        // Index of everything captured so far, in the dataset-io index format
        DatasetIndex capture_index(const std::string &topology, const RadioConfig &radio) const;

    private:
        net::Listener listener_;
        std::filesystem::path output_dir_;
        ChannelSource &source_;
        Options options_;
        mutable std::mutex mutex_;
        std::vector<CaptureRecord> captures_;
        std::size_t handled_ = 0;
    };

    enum class TriggerResult
    {
        ack,
        nak,
        timeout,
        refused,
    };

    std::string to_string(TriggerResult r);

    // One round trip: send six bytes, read one. Invalid payloads throw std::invalid_argument
    // before anything is sent.
    TriggerResult trigger_capture(const net::Endpoint &endpoint, std::string_view payload, net::Millis timeout);

    // Line-oriented TCP front end for the testbed's positioners
    class PositionerServer
    {
    public:
        PositionerServer(const net::Endpoint &listen, VirtualTestbed &testbed);
        const net::Endpoint &endpoint() const { return listener_.endpoint(); }
        // Serves one client connection at a time until stop is requested
        void serve(std::stop_token stop);

    private:
        net::Listener listener_;
        VirtualTestbed &testbed_;
    };

    // How the campaign runner reaches the positioners
    class PositionerLink
    {
    public:
        virtual ~PositionerLink() = default;
        virtual std::string send(int positioner, std::string_view command) = 0;
    };

    class LocalPositionerLink final : public PositionerLink
    {
    public:
        explicit LocalPositionerLink(VirtualTestbed &testbed) : testbed_(testbed) {}
        std::string send(int positioner, std::string_view command) override;

    private:
        VirtualTestbed &testbed_;
        int selected_ = 0;
    };

    class TcpPositionerLink final : public PositionerLink
    {
    public:
        TcpPositionerLink(const net::Endpoint &endpoint, net::Millis timeout);
        std::string send(int positioner, std::string_view command) override;

    private:
        net::Socket socket_;
        net::Millis timeout_;
        int selected_ = -1;
    };

    class CampaignError : public std::runtime_error
    {
    public:
        CampaignError(const std::string &what, std::size_t waypoint, int positioner)
            : std::runtime_error(what), waypoint_(waypoint), positioner_(positioner)
        {
        }
        std::size_t waypoint() const { return waypoint_; }
        int positioner() const { return positioner_; }

    private:
        std::size_t waypoint_;
        int positioner_;
    };

    struct CampaignRun
    {
        DatasetIndex index;
        double elapsed_s = 0.0; // on the supplied clock
    };

    // Per round: every table moves, the clock waits out the step, then each table's user is
    // selected and captured. Sample ids are the zero-padded waypoint counter; labels are the
    // commanded positions. Any positioner error or non-ACK aborts.
    CampaignRun run_campaign(const CampaignPlan &plan, PositionerLink &positioners,
                             const net::Endpoint &capture, const std::filesystem::path &output_dir, Clock &clock,
                             const std::string &topology, const RadioConfig &radio,
                             net::Millis trigger_timeout = net::Millis(5000));
}

#endif
