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

#include "csikit/net.hpp"

#include <doctest.h>

#include <thread>

using namespace csikit;
using namespace std::chrono_literals;

TEST_CASE("endpoint parsing")
{
    CHECK(net::parse_endpoint("127.0.0.1:5000") == net::Endpoint{"127.0.0.1", 5000});
    CHECK(net::parse_endpoint("localhost:0").port == 0);
    CHECK_THROWS_AS(net::parse_endpoint("nohost"), std::invalid_argument);
    CHECK_THROWS_AS(net::parse_endpoint(":80"), std::invalid_argument);
    CHECK_THROWS_AS(net::parse_endpoint("a:70000"), std::invalid_argument);
    CHECK_THROWS_AS(net::parse_endpoint("a:port"), std::invalid_argument);
}

TEST_CASE("ephemeral listener, exact reads and line framing")
{
    net::Listener l({"127.0.0.1", 0});
    REQUIRE(l.endpoint().port != 0);
    std::jthread client([ep = l.endpoint()] {
        auto s = net::connect(ep, 1000ms);
        s.write_all(std::string_view("abcdefline one\nline two\npartial"), 1000ms);
        std::this_thread::sleep_for(50ms);
    });
    auto conn = l.accept(2000ms);
    REQUIRE(conn);
    CHECK(conn->read_exact(6, 1000ms) == "abcdef");
    CHECK(conn->read_line(1000ms) == "line one\n");
    CHECK(conn->read_line(1000ms) == "line two\n");
    CHECK_THROWS_AS(conn->read_line(1000ms), net::NetError);
}

TEST_CASE("accept times out without a client")
{
    net::Listener l({"127.0.0.1", 0});
    CHECK_FALSE(l.accept(20ms).has_value());
}

TEST_CASE("read timeout and refused connection are classified")
{
    net::Listener l({"127.0.0.1", 0});
    auto s = net::connect(l.endpoint(), 1000ms);
    auto conn = l.accept(1000ms);
    REQUIRE(conn);
    try
    {
        conn->read_exact(1, 30ms);
        FAIL("expected timeout");
    }
    catch (const net::NetError &e)
    {
        CHECK(e.kind() == net::NetError::Kind::timeout);
    }

    net::Endpoint closed;
    {
        net::Listener tmp({"127.0.0.1", 0});
        closed = tmp.endpoint();
    }
    try
    {
        net::connect(closed, 500ms);
        FAIL("expected refusal");
    }
    catch (const net::NetError &e)
    {
        CHECK(e.kind() == net::NetError::Kind::refused);
    }
}

TEST_CASE("short read on orderly close")
{
    net::Listener l({"127.0.0.1", 0});
    {
        auto s = net::connect(l.endpoint(), 1000ms);
        s.write_all(std::string_view("abc"), 1000ms);
    }
    auto conn = l.accept(1000ms);
    REQUIRE(conn);
    CHECK(conn->read_exact(6, 1000ms) == "abc");
}
