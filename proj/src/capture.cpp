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

#include "csikit/capture.hpp"
#include "csikit/rng.hpp"
#include "csikit/text.hpp"

#include <sys/socket.h>

#include <cmath>
#include <algorithm>
#include <map>
#include <stdexcept>

namespace csikit
{
    namespace fs = std::filesystem;

    namespace
    {
        std::uint64_t fnv1a(std::string_view s)
        {
            std::uint64_t h = 0xcbf29ce484222325ULL;
            for (unsigned char c : s)
            {
                h ^= c;
                h *= 0x100000001b3ULL;
            }
            return h;
        }

        std::optional<int> parse_tool_select(std::string_view command)
        {
            auto line = text::trim(command);
            if (line.size() != 2 || line[0] != 'T')
                return std::nullopt;
            return line[1] - '0';
        }
    }

    // ---- testbed ---------------------------------------------------------------------

    VirtualTestbed::VirtualTestbed(Options options) : options_(std::move(options))
    {
        options_.radio.validate();
        options_.channel.validate();
        if (options_.geometry.elements.empty())
            throw std::invalid_argument("testbed: array geometry has no elements");
        for (int u : options_.user_of_positioner)
            if (u < 0 || u >= options_.radio.interleave_factor || u >= max_users)
                throw std::invalid_argument("testbed: user id out of range");
        for (auto &t : tables_)
        {
            t.x_extent_mm = options_.site.table_extent_mm;
            t.y_extent_mm = options_.site.table_extent_mm;
        }
        if (options_.position_error_mm < 0.0 || options_.position_error_mm > tables_[0].accuracy_bound_mm)
            throw std::invalid_argument("testbed: placement error must lie within the 0.1 mm accuracy bound");
    }

    std::string VirtualTestbed::execute(int &selected, std::string_view command)
    {
        std::lock_guard lock(mutex_);
        if (const auto tool = parse_tool_select(command))
        {
            if (*tool < 0 || *tool > 3)
                return "error:parse\n";
            selected = *tool;
            active_ = *tool;
            return "ok\n";
        }
        if (selected < 0 || selected > 3)
            return "error:parse\n";
        auto &table = tables_[static_cast<std::size_t>(selected)];
        const auto reply = positioner_execute(table, command);
        if (reply == "ok\n")
        {
            active_ = selected;
            auto &err = error_[static_cast<std::size_t>(selected)];
            err = {};
            if (options_.position_error_mm > 0.0)
            {
                Rng rng(mix_seed(options_.seed, move_counter_));
                err.x = rng.uniform(-options_.position_error_mm, options_.position_error_mm);
                err.y = rng.uniform(-options_.position_error_mm, options_.position_error_mm);
            }
            ++move_counter_;
        }
        return reply;
    }

    std::string VirtualTestbed::execute_on(int positioner, std::string_view command)
    {
        int selected = positioner;
        {
            std::lock_guard lock(mutex_);
            active_ = positioner;
        }
        return execute(selected, command);
    }

    VirtualTestbed::ActiveUser VirtualTestbed::active_user() const
    {
        std::lock_guard lock(mutex_);
        const auto &t = tables_[static_cast<std::size_t>(active_)];
        ActiveUser au;
        au.positioner_id = active_;
        au.user_id = options_.user_of_positioner[static_cast<std::size_t>(active_)];
        au.commanded = options_.site.table_origin(active_) + Position3{t.x_mm, t.y_mm, 0.0};
        au.actual = au.commanded + error_[static_cast<std::size_t>(active_)];
        return au;
    }

    PositionerState VirtualTestbed::positioner(int id) const
    {
        std::lock_guard lock(mutex_);
        return tables_.at(static_cast<std::size_t>(id));
    }

    // ---- channel sources -------------------------------------------------------------

    CsiSample SyntheticSource::snapshot(std::string_view sample_id)
    {
        const auto au = testbed_.active_user();
        const auto &o = testbed_.options();
        auto csi = multipath_channel(o.geometry, au.actual, o.radio, o.channel, o.scatterers, au.user_id);
        csi = add_noise(csi, {o.snr_db, mix_seed(o.seed, fnv1a(sample_id))});
        csi.label = au.commanded;
        csi.sample_id = std::string(sample_id);
        return csi;
    }

    ReplaySource::ReplaySource(const VirtualTestbed &testbed, DatasetIndex index)
        : testbed_(testbed), index_(std::move(index))
    {
    }

    CsiSample ReplaySource::snapshot(std::string_view sample_id)
    {
        const auto au = testbed_.active_user();
        for (const auto &rec : index_.records)
            if (rec.user_id == au.user_id && std::abs(rec.label.x - au.commanded.x) < 1e-6 &&
                std::abs(rec.label.y - au.commanded.y) < 1e-6)
            {
                auto csi = load_record(rec);
                csi.sample_id = std::string(sample_id);
                return csi;
            }
        throw std::out_of_range("replay: no recorded sample for user " + std::to_string(au.user_id) + " at (" +
                                text::format_number(au.commanded.x) + ", " + text::format_number(au.commanded.y) +
                                ")");
    }

    // ---- capture service -------------------------------------------------------------

    CaptureService::CaptureService(const net::Endpoint &listen, fs::path output_dir, ChannelSource &source,
                                   Options options)
        : listener_(listen), output_dir_(std::move(output_dir)), source_(source), options_(std::move(options))
    {
        if (!options_.writer)
            options_.writer = [](const fs::path &p, const CsiSample &s) { return write_sample(p, s); };
        fs::create_directories(output_dir_);
    }

    std::uint8_t CaptureService::handle(std::string_view payload)
    {
        std::lock_guard lock(mutex_);
        ++handled_;
        if (!is_valid_sample_id(payload))
            return trigger_nak;
        try
        {
            const auto csi = source_.snapshot(payload);
            options_.writer(output_dir_ / (std::string(payload) + ".bin"), csi);
            CaptureRecord rec{std::string(payload), csi.user_id, csi.label.value_or(Position3{})};
            auto it = std::find_if(captures_.begin(), captures_.end(),
                                   [&](const CaptureRecord &r) { return r.sample_id == payload; });
            if (it != captures_.end())
                *it = rec;
            else
                captures_.push_back(std::move(rec));
            return trigger_ack;
        }
        catch (const std::exception &)
        {
            return trigger_nak;
        }
    }

    void CaptureService::serve(std::stop_token stop, std::size_t max_requests)
    {
        std::size_t served = 0;
        while (!stop.stop_requested() && (max_requests == 0 || served < max_requests))
        {
            auto conn = listener_.accept(net::Millis(100));
            if (!conn)
                continue;
            ++served;
            try
            {
                const auto payload = conn->read_exact(sample_id_length, options_.read_timeout);
                const std::uint8_t reply = payload.size() == sample_id_length ? handle(payload) : trigger_nak;
                conn->write_all(std::span(&reply, 1), options_.read_timeout);
            }
            catch (const net::NetError &)
            {
                // client vanished or stalled; nothing was written for a short read
            }
        }
    }

    std::vector<CaptureRecord> CaptureService::captures() const
    {
        std::lock_guard lock(mutex_);
        return captures_;
    }

    std::size_t CaptureService::requests_handled() const
    {
        std::lock_guard lock(mutex_);
        return handled_;
    }

    DatasetIndex CaptureService::capture_index(const std::string &topology, const RadioConfig &radio) const
    {
        DatasetIndex index;
        index.base_dir = output_dir_;
        index.topology = topology;
        index.radio = radio;
        for (const auto &c : captures())
            index.add(c.sample_id, c.user_id, c.label);
        return index;
    }

    std::string to_string(TriggerResult r)
    {
        switch (r)
        {
        case TriggerResult::ack:
            return "ack";
        case TriggerResult::nak:
            return "nak";
        case TriggerResult::timeout:
            return "timeout";
        case TriggerResult::refused:
            return "refused";
        }
        return "unknown";
    }

    TriggerResult trigger_capture(const net::Endpoint &endpoint, std::string_view payload, net::Millis timeout)
    {
        if (!is_valid_sample_id(payload))
            throw std::invalid_argument("trigger payload must be six bytes of [0-9A-Za-z_-], got '" +
                                        std::string(payload) + "'");
        net::Socket sock;
        try
        {
            sock = net::connect(endpoint, timeout);
            sock.write_all(payload, timeout);
            const auto reply = sock.read_exact(1, timeout);
            // Reset instead of lingering in TIME_WAIT; long campaigns open one connection per node
            const linger lg{1, 0};
            ::setsockopt(sock.fd(), SOL_SOCKET, SO_LINGER, &lg, sizeof(lg));
            if (reply.size() == 1 && static_cast<std::uint8_t>(reply[0]) == trigger_ack)
                return TriggerResult::ack;
            return TriggerResult::nak;
        }
        catch (const net::NetError &e)
        {
            if (e.kind() == net::NetError::Kind::refused)
                return TriggerResult::refused;
            if (e.kind() == net::NetError::Kind::timeout)
                return TriggerResult::timeout;
            return TriggerResult::nak;
        }
    }

    // ---- positioner front ends -------------------------------------------------------

    PositionerServer::PositionerServer(const net::Endpoint &listen, VirtualTestbed &testbed)
        : listener_(listen), testbed_(testbed)
    {
    }

    void PositionerServer::serve(std::stop_token stop)
    {
        while (!stop.stop_requested())
        {
            auto conn = listener_.accept(net::Millis(100));
            if (!conn)
                continue;
            int selected = 0;
            while (!stop.stop_requested())
            {
                std::string line;
                try
                {
                    line = conn->read_line(net::Millis(100));
                }
                catch (const net::NetError &e)
                {
                    if (e.kind() == net::NetError::Kind::timeout)
                        continue;
                    break;
                }
                try
                {
                    conn->write_all(testbed_.execute(selected, line), net::Millis(2000));
                }
                catch (const net::NetError &)
                {
                    break;
                }
            }
        }
    }

    std::string LocalPositionerLink::send(int positioner, std::string_view command)
    {
        if (selected_ != positioner)
            if (auto r = testbed_.execute(selected_, "T" + std::to_string(positioner) + "\n"); r != "ok\n")
                return r;
        return testbed_.execute(selected_, command);
    }

    TcpPositionerLink::TcpPositionerLink(const net::Endpoint &endpoint, net::Millis timeout)
        : socket_(net::connect(endpoint, timeout)), timeout_(timeout)
    {
    }

    std::string TcpPositionerLink::send(int positioner, std::string_view command)
    {
        if (selected_ != positioner)
        {
            socket_.write_all("T" + std::to_string(positioner) + "\n", timeout_);
            if (auto r = socket_.read_line(timeout_); r != "ok\n")
                return r;
            selected_ = positioner;
        }
        socket_.write_all(command, timeout_);
        return socket_.read_line(timeout_);
    }

    // ---- campaign runner ---------------------------------------------------------------

    CampaignRun run_campaign(const CampaignPlan &plan, PositionerLink &positioners, const net::Endpoint &capture,
                             const fs::path &output_dir, Clock &clock, const std::string &topology,
                             const RadioConfig &radio, net::Millis trigger_timeout)
    {
        plan.validate();
        fs::create_directories(output_dir);
        CampaignRun run;
        run.index.base_dir = output_dir;
        run.index.topology = topology;
        run.index.radio = radio;
        const double start = clock.elapsed_s();

        auto expect_ok = [&](int p, std::string_view cmd, std::size_t waypoint) {
            const auto reply = positioners.send(p, cmd);
            if (reply != "ok\n")
                throw CampaignError("positioner " + std::to_string(p) + " rejected '" +
                                        std::string(text::trim(cmd)) + "' at waypoint " + std::to_string(waypoint) +
                                        ": " + std::string(text::trim(reply)),
                                    waypoint, p);
        };

        if (plan.total_waypoints() == 0)
            return run;
        for (const auto &t : plan.tracks)
            expect_ok(t.positioner_id, "G28\n", 0);

        std::size_t counter = 0;
        for (std::size_t r = 0; r < plan.rounds(); ++r)
        {
            std::size_t c = counter;
            for (const auto &t : plan.tracks)
            {
                if (r >= t.waypoints.size())
                    continue;
                const auto local = t.waypoints[r] - t.grid.origin;
                expect_ok(t.positioner_id, format_move_command(local.x, local.y), c++);
            }
            clock.sleep(plan.step_s - plan.dwell_s);
            clock.sleep(plan.dwell_s);

            for (const auto &t : plan.tracks)
            {
                if (r >= t.waypoints.size())
                    continue;
                expect_ok(t.positioner_id, "T" + std::to_string(t.positioner_id) + "\n", counter);
                const auto id = format_sample_id(counter);
                const auto result = trigger_capture(capture, id, trigger_timeout);
                if (result != TriggerResult::ack)
                    throw CampaignError("capture of waypoint " + std::to_string(counter) + " (sample " + id +
                                            ", positioner " + std::to_string(t.positioner_id) +
                                            ") failed: " + to_string(result),
                                        counter, t.positioner_id);
                const auto local = t.waypoints[r] - t.grid.origin;
                run.index.add(id, t.user_id, t.grid.origin + Position3{local.x, local.y, 0.0});
                ++counter;
            }
        }
        run.elapsed_s = clock.elapsed_s() - start;
        return run;
    }
}
