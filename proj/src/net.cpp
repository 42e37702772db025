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
#include "csikit/text.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <algorithm>
#include <cstring>

namespace csikit::net
{
    Endpoint parse_endpoint(std::string_view s)
    {
        const auto colon = s.rfind(':');
        if (colon == std::string_view::npos || colon == 0)
            throw std::invalid_argument("endpoint must be 'host:port', got '" + std::string(s) + "'");
        const auto port = text::parse_integer(s.substr(colon + 1), "port");
        if (port < 0 || port > 65535)
            throw std::invalid_argument("port out of range in '" + std::string(s) + "'");
        return {std::string(s.substr(0, colon)), static_cast<std::uint16_t>(port)};
    }

    namespace
    {
        sockaddr_in resolve(const Endpoint &ep)
        {
            addrinfo hints{};
            hints.ai_family = AF_INET;
            hints.ai_socktype = SOCK_STREAM;
            addrinfo *res = nullptr;
            if (const int rc = ::getaddrinfo(ep.host.c_str(), nullptr, &hints, &res); rc != 0 || res == nullptr)
                throw NetError(NetError::Kind::other, "cannot resolve '" + ep.host + "': " + ::gai_strerror(rc));
            sockaddr_in addr{};
            std::memcpy(&addr, res->ai_addr, sizeof(addr));
            ::freeaddrinfo(res);
            addr.sin_port = htons(ep.port);
            return addr;
        }

        std::string errno_text() { return std::strerror(errno); }

        int remaining_ms(std::chrono::steady_clock::time_point deadline)
        {
            const auto left = std::chrono::duration_cast<Millis>(deadline - std::chrono::steady_clock::now());
            return static_cast<int>(std::max<Millis::rep>(0, left.count()));
        }
    }

    Socket &Socket::operator=(Socket &&o) noexcept
    {
        if (this != &o)
        {
            close();
            fd_ = std::exchange(o.fd_, -1);
            buffer_ = std::move(o.buffer_);
        }
        return *this;
    }

    void Socket::close()
    {
        if (fd_ >= 0)
            ::close(fd_);
        fd_ = -1;
    }

    void Socket::wait(short events, Millis timeout)
    {
        pollfd p{fd_, events, 0};
        while (true)
        {
            const int rc = ::poll(&p, 1, static_cast<int>(timeout.count()));
            if (rc > 0)
                return;
            if (rc == 0)
                throw NetError(NetError::Kind::timeout, "socket timed out");
            if (errno != EINTR)
                throw NetError(NetError::Kind::other, "poll: " + errno_text());
        }
    }

    void Socket::write_all(std::span<const std::uint8_t> bytes, Millis timeout)
    {
        const auto deadline = std::chrono::steady_clock::now() + timeout;
        std::size_t sent = 0;
        while (sent < bytes.size())
        {
            wait(POLLOUT, Millis(remaining_ms(deadline)));
            const auto n = ::send(fd_, bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
            if (n < 0)
            {
                if (errno == EINTR || errno == EAGAIN)
                    continue;
                throw NetError(NetError::Kind::closed, "send: " + errno_text());
            }
            sent += static_cast<std::size_t>(n);
        }
    }

    void Socket::write_all(std::string_view s, Millis timeout)
    {
        write_all(std::span(reinterpret_cast<const std::uint8_t *>(s.data()), s.size()), timeout);
    }

    std::string Socket::read_exact(std::size_t n, Millis timeout)
    {
        const auto deadline = std::chrono::steady_clock::now() + timeout;
        std::string out = std::move(buffer_);
        buffer_.clear();
        if (out.size() > n)
        {
            buffer_ = out.substr(n);
            out.resize(n);
        }
        char buf[512];
        while (out.size() < n)
        {
            wait(POLLIN, Millis(remaining_ms(deadline)));
            const auto r = ::recv(fd_, buf, std::min(sizeof(buf), n - out.size()), 0);
            if (r < 0)
            {
                if (errno == EINTR || errno == EAGAIN)
                    continue;
                throw NetError(NetError::Kind::closed, "recv: " + errno_text());
            }
            if (r == 0)
                break;
            out.append(buf, static_cast<std::size_t>(r));
        }
        return out;
    }

    std::string Socket::read_line(Millis timeout, std::size_t max_len)
    {
        const auto deadline = std::chrono::steady_clock::now() + timeout;
        char buf[512];
        while (true)
        {
            if (const auto lf = buffer_.find('\n'); lf != std::string::npos)
            {
                std::string line = buffer_.substr(0, lf + 1);
                buffer_.erase(0, lf + 1);
                return line;
            }
            if (buffer_.size() > max_len)
                throw NetError(NetError::Kind::other, "line too long");
            wait(POLLIN, Millis(remaining_ms(deadline)));
            const auto r = ::recv(fd_, buf, sizeof(buf), 0);
            if (r < 0)
            {
                if (errno == EINTR || errno == EAGAIN)
                    continue;
                throw NetError(NetError::Kind::closed, "recv: " + errno_text());
            }
            if (r == 0)
                throw NetError(NetError::Kind::closed, "connection closed");
            buffer_.append(buf, static_cast<std::size_t>(r));
        }
    }

    Socket connect(const Endpoint &ep, Millis timeout)
    {
        const auto addr = resolve(ep);
        Socket s(::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0));
        if (!s.valid())
            throw NetError(NetError::Kind::other, "socket: " + errno_text());
        const int flags = ::fcntl(s.fd(), F_GETFL, 0);
        ::fcntl(s.fd(), F_SETFL, flags | O_NONBLOCK);
        if (::connect(s.fd(), reinterpret_cast<const sockaddr *>(&addr), sizeof(addr)) != 0)
        {
            if (errno == ECONNREFUSED)
                throw NetError(NetError::Kind::refused, "connection refused by " + ep.to_string());
            if (errno != EINPROGRESS)
                throw NetError(NetError::Kind::other, "connect " + ep.to_string() + ": " + errno_text());
            pollfd p{s.fd(), POLLOUT, 0};
            int rc;
            do
                rc = ::poll(&p, 1, static_cast<int>(timeout.count()));
            while (rc < 0 && errno == EINTR);
            if (rc == 0)
                throw NetError(NetError::Kind::timeout, "connect to " + ep.to_string() + " timed out");
            int err = 0;
            socklen_t len = sizeof(err);
            ::getsockopt(s.fd(), SOL_SOCKET, SO_ERROR, &err, &len);
            if (err == ECONNREFUSED)
                throw NetError(NetError::Kind::refused, "connection refused by " + ep.to_string());
            if (err != 0)
                throw NetError(NetError::Kind::other, "connect " + ep.to_string() + ": " + std::strerror(err));
        }
        const int one = 1;
        ::setsockopt(s.fd(), IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
        return s;
    }

    Listener::Listener(const Endpoint &ep)
    {
        const auto addr = resolve(ep);
        sock_ = Socket(::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0));
        if (!sock_.valid())
            throw NetError(NetError::Kind::other, "socket: " + errno_text());
        const int one = 1;
        ::setsockopt(sock_.fd(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
        if (::bind(sock_.fd(), reinterpret_cast<const sockaddr *>(&addr), sizeof(addr)) != 0)
            throw NetError(NetError::Kind::other, "bind " + ep.to_string() + ": " + errno_text());
        if (::listen(sock_.fd(), 64) != 0)
            throw NetError(NetError::Kind::other, "listen: " + errno_text());
        sockaddr_in bound{};
        socklen_t len = sizeof(bound);
        ::getsockname(sock_.fd(), reinterpret_cast<sockaddr *>(&bound), &len);
        char host[INET_ADDRSTRLEN];
        ::inet_ntop(AF_INET, &bound.sin_addr, host, sizeof(host));
        bound_ = {host, ntohs(bound.sin_port)};
    }

    std::optional<Socket> Listener::accept(Millis timeout)
    {
        pollfd p{sock_.fd(), POLLIN, 0};
        const int rc = ::poll(&p, 1, static_cast<int>(timeout.count()));
        if (rc <= 0)
            return std::nullopt;
        const int fd = ::accept4(sock_.fd(), nullptr, nullptr, SOCK_CLOEXEC | SOCK_NONBLOCK);
        if (fd < 0)
            return std::nullopt;
        const int one = 1;
        ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
        return Socket(fd);
    }
}
