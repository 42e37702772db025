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

#include "support.hpp"

#include "csikit/cli.hpp"
#include "csikit/dataset.hpp"
#include "csikit/text.hpp"

#include <doctest.h>

#include <sstream>

using namespace csikit;
namespace fs = std::filesystem;

namespace
{
    struct Result
    {
        int code;
        std::string out;
        std::string err;
    };

    Result cli(std::vector<std::string> args)
    {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return {code, out.str(), err.str()};
    }

    std::map<std::string, std::vector<std::uint8_t>> snapshot(const fs::path &dir)
    {
        std::map<std::string, std::vector<std::uint8_t>> files;
        for (const auto &e : fs::directory_iterator(dir))
            files[e.path().filename().string()] = read_binary_file(e.path());
        return files;
    }

    const std::string data_dir = CSIKIT_EXAMPLES;
}

TEST_CASE("usage and help")
{
    CHECK(cli({}).code == 2);
    CHECK(cli({"frobnicate"}).code == 2);
    CHECK(cli({"synth"}).code == 2); // --out is required
    for (const char *sub : {"synth", "campaign", "serve-capture", "powermap", "schedule", "locate", "inspect"})
    {
        const auto r = cli({sub, "--help"});
        CHECK(r.code == 0);
        CHECK(r.out.find("Usage") != std::string::npos);
    }
    const auto r = cli({"locate", "eval", "--help"});
    CHECK(r.out.find("--loo") != std::string::npos);
}

TEST_CASE("synth, inspect and locate")
{
    const auto dir = testing::scratch_dir("cli_synth");
    const auto ds = (dir / "ds").string();
    auto r = cli({"synth", "--out", ds, "--extent", "20", "--resolution", "5", "--seed", "3", "--snr-db", "30"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("wrote 25 samples") != std::string::npos);
    const auto index = load_index(fs::path(ds) / "index.csv");
    CHECK(index.size() == 25);
    CHECK(index.records[0].label == Position3{-1250, 1000, 1000});

    r = cli({"inspect", ds + "/000000.bin"});
    CHECK(r.code == 0);
    CHECK(r.out.find("M=64 F=100") != std::string::npos);
    CHECK(r.out.find("51212") != std::string::npos);

    r = cli({"locate", "build", "--dataset", ds + "/index.csv", "--out", (dir / "fp.db").string()});
    REQUIRE(r.code == 0);
    r = cli({"locate", "eval", "--db", (dir / "fp.db").string(), "--dataset", ds + "/index.csv", "--k", "1",
             "--out", (dir / "report.csv").string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("mean error 0.000 mm") != std::string::npos);
    CHECK(text::read_file(dir / "report.csv").starts_with("sample_id,err_mm\n000000,0.000000\n"));
    r = cli({"locate", "eval", "--db", (dir / "fp.db").string(), "--loo", "--k", "4"});
    CHECK(r.code == 0);
    CHECK(cli({"inspect", (dir / "fp.db").string()}).out.find("entries 25") != std::string::npos);
}

TEST_CASE("synth output is byte-identical for the same seed")
{
    const auto dir = testing::scratch_dir("cli_determinism");
    for (const char *run : {"a", "b"})
        REQUIRE(cli({"synth", "--out", (dir / run).string(), "--extent", "10", "--seed", "9", "--snr-db", "10",
                     "--scatterers", data_dir + "/scatterers.csv", "--config", data_dir + "/testbed.conf"})
                    .code == 0);
    CHECK(snapshot(dir / "a") == snapshot(dir / "b"));
    REQUIRE(cli({"synth", "--out", (dir / "c").string(), "--extent", "10", "--seed", "10", "--snr-db", "10"}).code ==
            0);
    CHECK(snapshot(dir / "a") != snapshot(dir / "c"));
    CHECK(load_index(dir / "a" / "index.csv").topology == "da");
}

TEST_CASE("synth and campaign agree on the captured data")
{
    const auto dir = testing::scratch_dir("cli_campaign");
    REQUIRE(cli({"synth", "--out", (dir / "s").string(), "--extent", "10", "--pattern", "serpentine", "--seed", "4",
                 "--snr-db", "20"})
                .code == 0);
    const auto r = cli({"campaign", "--out", (dir / "c").string(), "--extent", "10", "--seed", "4", "--snr-db",
                        "20"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("captured 9 samples") != std::string::npos);
    CHECK(snapshot(dir / "s") == snapshot(dir / "c"));
}

TEST_CASE("powermap and schedule outputs")
{
    const auto dir = testing::scratch_dir("cli_outputs");
    auto r = cli({"powermap", "--target", "0,1500", "--size", "11", "--out", (dir / "m.pgm").string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("argmax 0,1500") != std::string::npos);
    CHECK(fs::exists(dir / "m.csv"));
    CHECK(text::read_file(dir / "m.pgm").starts_with("P5\n11 11\n65535\n"));

    r = cli({"schedule", "--users", "12", "--group-size", "4", "--algorithm", "sus", "--out",
             (dir / "s.csv").string(), "--seed", "2"});
    REQUIRE(r.code == 0);
    const auto csv = text::read_file(dir / "s.csv");
    CHECK(csv.starts_with("group_id,user_id,x_mm,y_mm\n"));
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 13);
    CHECK(cli({"schedule", "--algorithm", "greedy"}).code == 1);
}

TEST_CASE("runtime errors exit with status 1")
{
    const auto dir = testing::scratch_dir("cli_errors");
    CHECK(cli({"synth", "--out", dir.string(), "--topology", "ring"}).code == 1);
    CHECK(cli({"synth", "--out", dir.string(), "--extent", "1300"}).code == 1);
    const auto r = cli({"inspect", (fs::path(data_dir) / "testbed.conf").string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("bad magic") != std::string::npos);
}
