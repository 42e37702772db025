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

#ifndef CSIKIT_NET_HPP
#define CSIKIT_NET_HPP

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace csikit::net
{
    struct Endpoint
    {
        std::string host = "127.0.0.1";
        std::uint16_t port = 0;

        std::string to_string() const { return host + ":" + std::to_string(port); }
        friend bool operator==(const Endpoint &, const Endpoint &) = default;
    };

    // "host:port"
    Endpoint parse_endpoint(std::string_view s);

    class NetError : public std::runtime_error
    {
    public:
        enum class Kind
        {
            refused,
            timeout,
            closed,
            other
        };
        NetError(Kind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}
        Kind kind() const noexcept { return kind_; }

    private:
        Kind kind_;
    };

    using Millis = std::chrono::milliseconds;

    // Owning file descriptor for a connected TCP stream
    class Socket
    {
    public:
        Socket() = default;
        explicit Socket(int fd) : fd_(fd) {}
        Socket(Socket &&o) noexcept : fd_(std::exchange(o.fd_, -1)) {}
        Socket &operator=(Socket &&o) noexcept;
        Socket(const Socket &) = delete;
        Socket &operator=(const Socket &) = delete;
        ~Socket() { close(); }

        int fd() const { return fd_; }
        bool valid() const { return fd_ >= 0; }
        void close();

        void write_all(std::span<const std::uint8_t> bytes, Millis timeout);
        void write_all(std::string_view s, Millis timeout);

        // Reads up to n bytes; stops early only on orderly close. Throws on timeout.
        std::string read_exact(std::size_t n, Millis timeout);

        // Reads through the next LF (included). Throws on timeout or close before LF.
        std::string read_line(Millis timeout, std::size_t max_len = 4096);

    private:
        void wait(short events, Millis timeout);
        int fd_ = -1;
        std::string buffer_; // bytes read past the last line
    };

    Socket connect(const Endpoint &ep, Millis timeout);

    class Listener
    {
    public:
        explicit Listener(const Endpoint &ep);
        Listener(Listener &&) noexcept = default;
        Listener &operator=(Listener &&) noexcept = default;

        // Actual bound address; port 0 requests resolve to the kernel's pick
        const Endpoint &endpoint() const { return bound_; }

        // Empty optional on timeout
        std::optional<Socket> accept(Millis timeout);

    private:
        Socket sock_;
        Endpoint bound_;
    };
}

#endif
