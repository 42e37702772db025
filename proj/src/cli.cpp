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

#include "csikit/cli.hpp"
#include "csikit/capture.hpp"
#include "csikit/config.hpp"
#include "csikit/dataset.hpp"
#include "csikit/localization.hpp"
#include "csikit/power_map.hpp"
#include "csikit/precoding.hpp"
#include "csikit/rng.hpp"
#include "csikit/scheduling.hpp"
#include "csikit/synthetic.hpp"
#include "csikit/text.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <cstdio>
#include <limits>
#include <numeric>
#include <thread>

namespace csikit
{
    namespace fs = std::filesystem;

    namespace
    {
        constexpr double infinity = std::numeric_limits<double>::infinity();

        struct CommonOptions
        {
            std::string config;
            std::uint64_t seed = 1;
            std::string topology;
            double snr_db = infinity;
            std::string scatterers;
            std::optional<double> noise_dbm;
        };

        void add_common(CLI::App *cmd, CommonOptions &o, bool with_channel = true)
        {
            cmd->add_option("--config", o.config, "Testbed config file (key = value)")->check(CLI::ExistingFile);
            cmd->add_option("--seed", o.seed, "Seed for every stochastic stage")->capture_default_str();
            cmd->add_option("--topology", o.topology, "Array topology: ura, ula or da");
            if (with_channel)
            {
                cmd->add_option("--snr-db", o.snr_db, "Synthetic CSI SNR in dB (default: noiseless)");
                cmd->add_option("--scatterers", o.scatterers, "Scatterer CSV x_mm,y_mm,z_mm,gamma_re,gamma_im")
                    ->check(CLI::ExistingFile);
            }
            cmd->add_option("--noise-dbm", o.noise_dbm, "Receiver noise per subcarrier in dBm (overrides config)");
        }

        ToolkitConfig resolve_config(const CommonOptions &o)
        {
            ToolkitConfig cfg = o.config.empty() ? ToolkitConfig{} : load_config(o.config);
            if (!o.topology.empty())
                cfg.topology = parse_topology_kind(o.topology);
            if (o.noise_dbm)
                cfg.noise_power_dbm = *o.noise_dbm;
            return cfg;
        }

        VirtualTestbed::Options testbed_options(const ToolkitConfig &cfg, const CommonOptions &o)
        {
            VirtualTestbed::Options t;
            t.geometry = cfg.geometry();
            t.radio = cfg.radio;
            t.channel.pattern_exponent = cfg.pattern_exponent;
            if (!o.scatterers.empty())
                t.scatterers = load_scatterers_csv(o.scatterers);
            t.site = cfg.site;
            t.snr_db = o.snr_db;
            t.seed = o.seed;
            return t;
        }

        Position3 parse_position(const std::string &s, double default_z)
        {
            const auto parts = text::split(s, ',');
            if (parts.size() != 2 && parts.size() != 3)
                throw std::invalid_argument("position must be 'x,y' or 'x,y,z' in mm, got '" + s + "'");
            return {text::parse_number(parts[0], "x"), text::parse_number(parts[1], "y"),
                    parts.size() == 3 ? text::parse_number(parts[2], "z") : default_z};
        }

        std::vector<int> parse_int_list(const std::string &s)
        {
            std::vector<int> out;
            for (auto p : text::split(s, ','))
                out.push_back(static_cast<int>(text::parse_integer(p, "list entry")));
            return out;
        }

        std::string fixed(double v, int digits = 3)
        {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
            return buf;
        }

        std::vector<CsiSample> load_all(const DatasetIndex &index)
        {
            std::vector<CsiSample> out;
            for (const auto &rec : index.records)
                out.push_back(load_record(rec));
            return out;
        }

        std::atomic<bool> interrupted{false};
        extern "C" void on_signal(int) { interrupted = true; }

        // ---- synth ---------------------------------------------------------------------

        struct SynthOptions
        {
            CommonOptions common;
            std::string out;
            int positioner = 0;
            std::string offset = "0,0";
            double extent = 1250.0;
            double resolution = 5.0;
            std::string pattern = "raster";
        };

        int run_synth(const SynthOptions &o, std::ostream &out)
        {
            const auto cfg = resolve_config(o.common);
            auto opts = testbed_options(cfg, o.common);
            VirtualTestbed testbed(opts);
            SyntheticSource source(testbed);
            LocalPositionerLink link(testbed);

            const auto offset = parse_position(o.offset, 0.0);
            auto grid = positioner_grid(cfg.site, o.positioner, o.resolution);
            grid.origin = grid.origin + Position3{offset.x, offset.y, 0.0};
            grid.x_extent_mm = grid.y_extent_mm = o.extent;
            const auto plan = plan_traversal(grid, parse_traversal(o.pattern), 0.0, 0.0);
            const auto &track = plan.tracks.front();

            const fs::path dir = o.out;
            fs::create_directories(dir);
            DatasetIndex index;
            index.base_dir = dir;
            index.topology = to_string(cfg.topology);
            index.radio = cfg.radio;
            if (auto r = link.send(o.positioner, "G28\n"); r != "ok\n")
                throw std::runtime_error("positioner: " + r);
            const auto table = cfg.site.table_origin(o.positioner);
            for (std::size_t i = 0; i < track.waypoints.size(); ++i)
            {
                const auto local = track.waypoints[i] - table;
                if (auto r = link.send(o.positioner, format_move_command(local.x, local.y)); r != "ok\n")
                    throw std::runtime_error("waypoint " + std::to_string(i) + ": positioner replied " +
                                             std::string(text::trim(r)));
                const auto id = format_sample_id(i);
                const auto csi = source.snapshot(id);
                write_sample(dir / (id + ".bin"), csi);
                index.add(id, csi.user_id, *csi.label);
            }
            save_index(dir / "index.csv", index);
            out << "wrote " << index.size() << " samples (" << index.topology << ") to " << dir.string() << "\n";
            return 0;
        }

        // ---- campaign ------------------------------------------------------------------

        struct CampaignOptions
        {
            CommonOptions common;
            std::string out;
            std::string positioners = "0";
            double extent = 1250.0;
            double resolution = 5.0;
            std::string pattern = "serpentine";
            double dwell = 0.5;
            double step = 0.7;
            bool wall_clock = false;
            std::string capture_addr;
            std::string positioner_addr;
            double position_error = 0.0;
        };

        int run_campaign_cmd(const CampaignOptions &o, std::ostream &out)
        {
            const auto cfg = resolve_config(o.common);
            const auto ids = parse_int_list(o.positioners);
            auto plan = plan_campaign(cfg.site, ids, o.resolution, parse_traversal(o.pattern));
            for (auto &t : plan.tracks)
            {
                t.grid.x_extent_mm = t.grid.y_extent_mm = o.extent;
                t.waypoints = grid_positions(t.grid, parse_traversal(o.pattern));
            }
            plan.dwell_s = o.dwell;
            plan.step_s = o.step;
            plan.validate();

            SimulatedClock sim;
            WallClock wall;
            Clock &clock = o.wall_clock ? static_cast<Clock &>(wall) : static_cast<Clock &>(sim);
            const fs::path dir = o.out;
            CampaignRun run;

            if (o.capture_addr.empty())
            {
                auto opts = testbed_options(cfg, o.common);
                opts.position_error_mm = o.position_error;
                VirtualTestbed testbed(opts);
                SyntheticSource source(testbed);
                CaptureService service({"127.0.0.1", 0}, dir, source);
                std::jthread server([&](std::stop_token st) { service.serve(st); });
                LocalPositionerLink link(testbed);
                run = run_campaign(plan, link, service.endpoint(), dir, clock, to_string(cfg.topology), cfg.radio);
            }
            else
            {
                if (o.positioner_addr.empty())
                    throw std::invalid_argument("--positioner-addr (or CSI_POSITIONER_ADDR) is required with a remote "
                                                "capture service");
                TcpPositionerLink link(net::parse_endpoint(o.positioner_addr), net::Millis(5000));
                run = run_campaign(plan, link, net::parse_endpoint(o.capture_addr), dir, clock,
                                   to_string(cfg.topology), cfg.radio);
            }
            save_index(dir / "index.csv", run.index);
            out << "captured " << run.index.size() << " samples over " << plan.tracks.size() << " positioner(s)\n";
            out << "estimated duration " << fixed(plan.duration_estimate_s(), 1) << " s ("
                << fixed(plan.duration_estimate_s() / 3600.0, 2) << " h)\n";
            if (!o.wall_clock)
                out << "simulated clock " << fixed(run.elapsed_s, 1) << " s\n";
            return 0;
        }

        // ---- serve-capture -------------------------------------------------------------

        struct ServeOptions
        {
            CommonOptions common;
            std::string listen = "127.0.0.1:5000";
            std::string positioner_listen = "127.0.0.1:5001";
            std::string out;
            std::string replay;
            std::size_t max_requests = 0;
            double position_error = 0.0;
        };

        int run_serve(const ServeOptions &o, std::ostream &out)
        {
            const auto cfg = resolve_config(o.common);
            auto opts = testbed_options(cfg, o.common);
            opts.position_error_mm = o.position_error;
            VirtualTestbed testbed(opts);
            std::unique_ptr<ChannelSource> source;
            if (o.replay.empty())
                source = std::make_unique<SyntheticSource>(testbed);
            else
                source = std::make_unique<ReplaySource>(testbed, load_index(o.replay));

            CaptureService service(net::parse_endpoint(o.listen), o.out, *source);
            PositionerServer positioners(net::parse_endpoint(o.positioner_listen), testbed);
            out << "capture service listening on " << service.endpoint().to_string() << "\n";
            out << "positioner service listening on " << positioners.endpoint().to_string() << "\n";
            out.flush();

            interrupted = false;
            auto previous_int = std::signal(SIGINT, on_signal);
            auto previous_term = std::signal(SIGTERM, on_signal);
            std::stop_source stop;
            {
                std::jthread pos_thread([&](std::stop_token st) { positioners.serve(st); });
                std::jthread watcher([&](std::stop_token st) {
                    while (!st.stop_requested() && !interrupted)
                        std::this_thread::sleep_for(std::chrono::milliseconds(50));
                    stop.request_stop();
                });
                service.serve(stop.get_token(), o.max_requests);
                watcher.request_stop();
                pos_thread.request_stop();
            }
            std::signal(SIGINT, previous_int);
            std::signal(SIGTERM, previous_term);

            const auto index = service.capture_index(to_string(cfg.topology), cfg.radio);
            save_index(fs::path(o.out) / "capture_index.csv", index);
            out << "handled " << service.requests_handled() << " requests, " << index.size() << " captures\n";
            return 0;
        }

        // ---- powermap ------------------------------------------------------------------

        struct PowerMapOptionsCli
        {
            CommonOptions common;
            std::string target;
            std::string out;
            std::string csv;
            std::size_t size = 51;
            double resolution = 5.0;
            std::string origin;
            std::string scheme = "mrt";
            std::string quantity = "correlation";
            double range_db = 40.0;
            std::string dataset;
            unsigned threads = 1;
        };

        int run_powermap(const PowerMapOptionsCli &o, std::ostream &out)
        {
            const auto cfg = resolve_config(o.common);
            const auto target_pos = parse_position(o.target, cfg.site.user_height_mm);
            if (o.size < 1)
                throw std::invalid_argument("--size must be at least 1");
            SampleGrid grid;
            grid.resolution_mm = o.resolution;
            grid.x_extent_mm = grid.y_extent_mm = static_cast<double>(o.size - 1) * o.resolution;
            if (o.origin.empty())
                grid.origin = {target_pos.x - grid.x_extent_mm / 2.0, target_pos.y - grid.y_extent_mm / 2.0,
                               target_pos.z};
            else
                grid.origin = parse_position(o.origin, target_pos.z);

            ChannelField field;
            if (o.dataset.empty())
            {
                const auto geom = cfg.geometry();
                ChannelConfig ch;
                ch.pattern_exponent = cfg.pattern_exponent;
                auto scatterers = o.common.scatterers.empty() ? std::vector<Scatterer>{}
                                                              : load_scatterers_csv(o.common.scatterers);
                const auto radio = cfg.radio;
                const auto snr = o.common.snr_db;
                const auto seed = o.common.seed;
                field = [=](const Position3 &p) {
                    auto csi = multipath_channel(geom, p, radio, ch, scatterers, 0);
                    const auto key = text::format_number(p.x) + "," + text::format_number(p.y);
                    std::uint64_t h = 0xcbf29ce484222325ULL;
                    for (unsigned char c : key)
                        h = (h ^ c) * 0x100000001b3ULL;
                    return add_noise(csi, {snr, mix_seed(seed, h)});
                };
            }
            else
                field = field_from_samples(load_all(load_index(o.dataset)));

            const auto target = field(target_pos);
            PowerMapOptions mo;
            mo.scheme = parse_precoding_scheme(o.scheme);
            mo.quantity = parse_map_quantity(o.quantity);
            mo.threads = o.threads;
            const auto budget = LinkBudget::from_radio(cfg.radio, cfg.noise_power_dbm);
            auto map = power_map(grid, field, std::span(&target, 1), budget, mo);
            map.target = target_pos;

            const fs::path pgm = o.out;
            const fs::path csv = o.csv.empty() ? fs::path(pgm).replace_extension(".csv") : fs::path(o.csv);
            write_power_map_pgm(pgm, map, -o.range_db, 0.0);
            write_power_map_csv(csv, map);
            const auto peak = map.grid.node(map.argmax().ix, map.argmax().iy);
            out << "map " << grid.nx() << "x" << grid.ny() << " written to " << pgm.string() << " and "
                << csv.string() << "\n";
            out << "argmax " << text::format_number(peak.x) << "," << text::format_number(peak.y) << "\n";
            out << "max adjacent jump " << fixed(max_adjacent_jump_db(map, -o.range_db), 4) << " dB\n";
            return 0;
        }

        // ---- schedule ------------------------------------------------------------------

        struct ScheduleOptions
        {
            CommonOptions common;
            std::size_t users = 24;
            std::size_t group_size = 4;
            std::string algorithm = "def";
            double alpha = 0.3;
            std::string scheme = "zf";
            std::string out;
            std::string dataset;
            std::string fingerprints;
            std::size_t k = 5;
            bool served_users = false;
            double tau = 1.0;
            int trials = 5;
        };

        int run_schedule(const ScheduleOptions &o, std::ostream &out)
        {
            const auto cfg = resolve_config(o.common);
            std::vector<CsiSample> samples;
            if (o.dataset.empty())
            {
                const auto positions = random_roi_positions(cfg.site, o.users, mix_seed(o.common.seed, 1));
                ChannelConfig ch;
                ch.pattern_exponent = cfg.pattern_exponent;
                const auto scatterers = o.common.scatterers.empty() ? std::vector<Scatterer>{}
                                                                    : load_scatterers_csv(o.common.scatterers);
                samples = synthesize_samples(cfg.geometry(), cfg.radio, ch, positions, 0,
                                             {o.common.snr_db, mix_seed(o.common.seed, 2)}, scatterers);
            }
            else
            {
                const auto index = load_index(o.dataset);
                if (index.size() < o.users)
                    throw std::invalid_argument("dataset holds fewer samples than --users");
                std::vector<std::size_t> order(index.size());
                std::iota(order.begin(), order.end(), std::size_t{0});
                Rng rng(mix_seed(o.common.seed, 1));
                rng.shuffle(std::span(order));
                for (std::size_t i = 0; i < o.users; ++i)
                    samples.push_back(load_record(index.records[order[i]]));
            }

            auto pool = make_pool(samples);
            if (!o.fingerprints.empty())
            {
                const auto db = load_fingerprints(o.fingerprints);
                KnnOptions ko;
                ko.k = o.k;
                for (auto &u : pool.users)
                    u.position = knn_locate(db, u.csi, ko);
            }

            Schedule schedule;
            if (o.algorithm == "def")
                schedule = def_schedule(pool, o.group_size);
            else if (o.algorithm == "sus")
                schedule = sus_schedule(pool, o.group_size, o.alpha);
            else if (o.algorithm == "random")
                schedule = random_schedule(pool.size(), o.group_size, mix_seed(o.common.seed, 3));
            else
                throw std::invalid_argument("unknown scheduling algorithm '" + o.algorithm + "'");

            const auto budget = LinkBudget::from_radio(cfg.radio, cfg.noise_power_dbm);
            const auto eval = evaluate_schedule(schedule, pool, parse_precoding_scheme(o.scheme), budget);
            if (!o.out.empty())
                write_file_atomic(o.out, format_schedule_csv(schedule, pool));
            out << o.algorithm << ": " << schedule.groups.size() << " groups of up to " << o.group_size << "\n";
            out << "mean sum SE " << fixed(eval.mean_sum_se, 4) << " bits/s/Hz\n";
            out << "min intra-group distance " << fixed(eval.min_intra_group_distance_mm, 2) << " mm\n";
            if (o.served_users)
            {
                const auto served = max_served_users(samples, o.tau, o.trials, mix_seed(o.common.seed, 4), budget);
                out << "max served users (ZF, tau " << text::format_number(o.tau) << ") " << served.median << "\n";
            }
            return 0;
        }

        // ---- locate --------------------------------------------------------------------

        struct LocateBuildOptions
        {
            std::string dataset;
            std::string out;
            std::string features = "raw";
        };

        struct LocateEvalOptions
        {
            std::string db;
            std::string dataset;
            bool loo = false;
            std::size_t k = 5;
            std::string weighting = "inverse_distance";
            std::string out;
        };

        int run_locate_build(const LocateBuildOptions &o, std::ostream &out)
        {
            const auto index = load_index(o.dataset);
            const auto db = build_fingerprints(SampleStream(index), {parse_feature_mode(o.features)}, index.topology);
            save_fingerprints(o.out, db);
            out << "fingerprint database with " << db.size() << " entries written to " << o.out << "\n";
            return 0;
        }

        int run_locate_eval(const LocateEvalOptions &o, std::ostream &out)
        {
            const auto db = load_fingerprints(o.db);
            KnnOptions ko;
            ko.k = o.k;
            ko.weighting = parse_knn_weighting(o.weighting);
            LocalizationReport report;
            if (o.loo)
                report = leave_one_out(db, ko);
            else
            {
                if (o.dataset.empty())
                    throw std::invalid_argument("locate eval needs --dataset or --loo");
                const auto index = load_index(o.dataset);
                const KnnLocalizer localizer(db, ko);
                for (const auto &item : SampleStream(index))
                {
                    report.sample_ids.push_back(item.record->sample_id);
                    report.errors_mm.push_back(distance_mm(localizer.locate(item.sample), item.record->label));
                }
                if (report.errors_mm.empty())
                    throw std::invalid_argument("localizer evaluation: empty test set");
                report.summarize();
            }
            if (!o.out.empty())
                write_file_atomic(o.out, format_report_csv(report));
            out << "queries " << report.errors_mm.size() << "\n";
            out << "mean error " << fixed(report.mean_mm) << " mm\n";
            out << "median error " << fixed(report.median_mm) << " mm\n";
            out << "p95 error " << fixed(report.p95_mm) << " mm\n";
            return 0;
        }

        // ---- inspect -------------------------------------------------------------------

        int run_inspect(const std::string &file, std::ostream &out)
        {
            const auto size = fs::file_size(file);
            const auto bytes = read_binary_file(file);
            if (bytes.size() >= 4 && std::equal(bytes.begin(), bytes.begin() + 4, "FPDB"))
            {
                const auto db = decode_fingerprints(bytes);
                out << "format FPDB v1\n";
                out << "features " << to_string(db.config.mode) << "\n";
                out << "M=" << db.antennas << " F=" << db.subcarriers << "\n";
                out << "entries " << db.size() << "\n";
                out << "size " << size << " bytes\n";
                return 0;
            }
            const auto hdr = decode_sample_header(bytes);
            out << "format CSI1 v" << static_cast<int>(hdr.version) << "\n";
            out << "M=" << hdr.antennas << " F=" << hdr.subcarriers << "\n";
            out << "size " << size << " bytes (header declares " << hdr.file_size() << ")\n";
            decode_sample(bytes); // full validation
            return 0;
        }
    }

    int run_cli(std::span<const std::string> args, std::ostream &out, std::ostream &err)
    {
        CLI::App app{"csikit: massive MIMO CSI toolkit", "csikit"};
        app.require_subcommand(1);
        app.fallthrough(false);

        SynthOptions synth;
        auto *synth_cmd = app.add_subcommand("synth", "Generate a synthetic labelled CSI dataset");
        add_common(synth_cmd, synth.common);
        synth_cmd->add_option("--out", synth.out, "Output directory")->required();
        synth_cmd->add_option("--positioner", synth.positioner, "Positioner table 0-3")->check(CLI::Range(0, 3));
        synth_cmd->add_option("--offset", synth.offset, "Patch origin within the table, 'x,y' mm");
        synth_cmd->add_option("--extent", synth.extent, "Patch side length in mm")->capture_default_str();
        synth_cmd->add_option("--resolution", synth.resolution, "Grid step in mm")->capture_default_str();
        synth_cmd->add_option("--pattern", synth.pattern, "raster or serpentine")->capture_default_str();

        CampaignOptions camp;
        auto *camp_cmd = app.add_subcommand("campaign", "Run the automated measurement campaign simulator");
        add_common(camp_cmd, camp.common);
        camp_cmd->add_option("--out", camp.out, "Output directory")->required();
        camp_cmd->add_option("--positioners", camp.positioners, "Comma-separated positioner ids")
            ->capture_default_str();
        camp_cmd->add_option("--extent", camp.extent, "Scanned side length per table in mm")->capture_default_str();
        camp_cmd->add_option("--resolution", camp.resolution, "Grid step in mm")->capture_default_str();
        camp_cmd->add_option("--pattern", camp.pattern, "raster or serpentine")->capture_default_str();
        camp_cmd->add_option("--dwell", camp.dwell, "Dwell per node in s")->capture_default_str();
        camp_cmd->add_option("--step", camp.step, "Time per node in s")->capture_default_str();
        camp_cmd->add_flag("--wall-clock", camp.wall_clock, "Sleep in real time instead of simulating");
        camp_cmd->add_option("--capture-addr", camp.capture_addr, "Remote capture service host:port")
            ->envname("CSI_CAPTURE_ADDR");
        camp_cmd->add_option("--positioner-addr", camp.positioner_addr, "Remote positioner service host:port")
            ->envname("CSI_POSITIONER_ADDR");
        camp_cmd->add_option("--position-error", camp.position_error, "Injected placement error bound in mm");

        ServeOptions serve;
        auto *serve_cmd = app.add_subcommand("serve-capture", "Run the TCP capture service and virtual positioners");
        add_common(serve_cmd, serve.common);
        serve_cmd->add_option("--listen", serve.listen, "Capture trigger endpoint host:port")
            ->envname("CSI_CAPTURE_ADDR")
            ->capture_default_str();
        serve_cmd->add_option("--positioner-listen", serve.positioner_listen, "Positioner endpoint host:port")
            ->envname("CSI_POSITIONER_ADDR")
            ->capture_default_str();
        serve_cmd->add_option("--out", serve.out, "Directory receiving <payload>.bin files")->required();
        serve_cmd->add_option("--replay", serve.replay, "Serve recorded samples from this index instead")
            ->check(CLI::ExistingFile);
        serve_cmd->add_option("--max-requests", serve.max_requests, "Exit after this many triggers (0 = never)");
        serve_cmd->add_option("--position-error", serve.position_error, "Injected placement error bound in mm");

        PowerMapOptionsCli pm;
        auto *pm_cmd = app.add_subcommand("powermap", "Normalised received-power map of a beam towards a target");
        add_common(pm_cmd, pm.common);
        pm_cmd->add_option("--target", pm.target, "Target position 'x,y[,z]' in mm")->required();
        pm_cmd->add_option("--out", pm.out, "Output PGM path")->required();
        pm_cmd->add_option("--csv", pm.csv, "Output CSV path (default: PGM path with .csv)");
        pm_cmd->add_option("--size", pm.size, "Nodes per axis")->capture_default_str();
        pm_cmd->add_option("--resolution", pm.resolution, "Node spacing in mm")->capture_default_str();
        pm_cmd->add_option("--origin", pm.origin, "Grid corner 'x,y' (default: centred on the target)");
        pm_cmd->add_option("--scheme", pm.scheme, "mrt or zf")->capture_default_str();
        pm_cmd->add_option("--quantity", pm.quantity, "correlation or power")->capture_default_str();
        pm_cmd->add_option("--range-db", pm.range_db, "PGM dynamic range in dB")->capture_default_str();
        pm_cmd->add_option("--dataset", pm.dataset, "Use recorded samples from this index")
            ->check(CLI::ExistingFile);
        pm_cmd->add_option("--threads", pm.threads, "Worker threads")->capture_default_str();

        ScheduleOptions sch;
        auto *sch_cmd = app.add_subcommand("schedule", "Group users with DEF, SUS or at random and report SE");
        add_common(sch_cmd, sch.common);
        sch_cmd->add_option("--users", sch.users, "Pool size")->capture_default_str();
        sch_cmd->add_option("--group-size", sch.group_size, "Users per group")->capture_default_str();
        sch_cmd->add_option("--algorithm", sch.algorithm, "def, sus or random")->capture_default_str();
        sch_cmd->add_option("--alpha", sch.alpha, "SUS orthogonality threshold")->capture_default_str();
        sch_cmd->add_option("--scheme", sch.scheme, "Precoder used for SE: zf or mrt")->capture_default_str();
        sch_cmd->add_option("--out", sch.out, "Schedule CSV path");
        sch_cmd->add_option("--dataset", sch.dataset, "Draw the pool from this index")->check(CLI::ExistingFile);
        sch_cmd->add_option("--fingerprints", sch.fingerprints, "Use kNN position estimates from this database")
            ->check(CLI::ExistingFile);
        sch_cmd->add_option("--k", sch.k, "Neighbours for position estimates")->capture_default_str();
        sch_cmd->add_flag("--served-users", sch.served_users, "Also report the ZF max served users of the pool");
        sch_cmd->add_option("--tau", sch.tau, "SE threshold for served users")->capture_default_str();
        sch_cmd->add_option("--trials", sch.trials, "Trials for served users")->capture_default_str();

        auto *loc_cmd = app.add_subcommand("locate", "Fingerprint localisation");
        loc_cmd->require_subcommand(1);
        LocateBuildOptions lb;
        auto *lb_cmd = loc_cmd->add_subcommand("build", "Build a fingerprint database from a dataset");
        lb_cmd->add_option("--dataset", lb.dataset, "Dataset index")->required()->check(CLI::ExistingFile);
        lb_cmd->add_option("--out", lb.out, "Database path")->required();
        lb_cmd->add_option("--features", lb.features, "raw, magnitude or phase")->capture_default_str();
        LocateEvalOptions le;
        auto *le_cmd = loc_cmd->add_subcommand("eval", "Evaluate kNN localisation");
        le_cmd->add_option("--db", le.db, "Fingerprint database")->required()->check(CLI::ExistingFile);
        le_cmd->add_option("--dataset", le.dataset, "Labelled test set index")->check(CLI::ExistingFile);
        le_cmd->add_flag("--loo", le.loo, "Leave-one-out over the database itself");
        le_cmd->add_option("--k", le.k, "Neighbours")->capture_default_str();
        le_cmd->add_option("--weighting", le.weighting, "uniform or inverse_distance")->capture_default_str();
        le_cmd->add_option("--out", le.out, "Per-query error CSV");

        std::string inspect_file;
        auto *ins_cmd = app.add_subcommand("inspect", "Print the header of a .bin sample or fingerprint database");
        ins_cmd->add_option("file", inspect_file, "File to inspect")->required()->check(CLI::ExistingFile);

        if (args.empty())
        {
            out << app.help();
            return 2;
        }
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        try
        {
            app.parse(reversed);
        }
        catch (const CLI::CallForHelp &)
        {
            const CLI::App *target = &app;
            for (auto *s : app.get_subcommands())
            {
                target = s;
                for (auto *ss : s->get_subcommands())
                    target = ss;
            }
            out << target->help();
            return 0;
        }
        catch (const CLI::CallForAllHelp &)
        {
            out << app.help("", CLI::AppFormatMode::All);
            return 0;
        }
        catch (const CLI::ParseError &e)
        {
            err << "csikit: " << e.what() << "\n\n" << app.help();
            return 2;
        }

        try
        {
            if (synth_cmd->parsed())
                return run_synth(synth, out);
            if (camp_cmd->parsed())
                return run_campaign_cmd(camp, out);
            if (serve_cmd->parsed())
                return run_serve(serve, out);
            if (pm_cmd->parsed())
                return run_powermap(pm, out);
            if (sch_cmd->parsed())
                return run_schedule(sch, out);
            if (lb_cmd->parsed())
                return run_locate_build(lb, out);
            if (le_cmd->parsed())
                return run_locate_eval(le, out);
            if (ins_cmd->parsed())
                return run_inspect(inspect_file, out);
        }
        catch (const std::exception &e)
        {
            err << "csikit: " << e.what() << "\n";
            return 1;
        }
        err << app.help();
        return 2;
    }
}
