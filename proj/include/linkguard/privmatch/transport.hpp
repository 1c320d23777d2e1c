// Copyright 2026 The linkguard Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LINKGUARD_PRIVMATCH_TRANSPORT_HPP_
#define LINKGUARD_PRIVMATCH_TRANSPORT_HPP_

#include <netdb.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <thread>

#include "linkguard/errors.hpp"
#include "linkguard/privmatch/wire.hpp"

namespace linkguard::privmatch {

// Reliable, ordered byte stream carrying whole frames.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual void send_bytes(std::span<const std::uint8_t> bytes) = 0;
  // Reads exactly n bytes; nullopt on end-of-stream before the first byte.
  // End-of-stream in the middle is a protocol error.
  virtual std::optional<Bytes> recv_exact(std::size_t n) = 0;
  virtual void close() = 0;

  void send(const WireMessage& m) { send_bytes(encode_msg(m)); }

  // nullopt on clean end-of-stream between frames.
  std::optional<WireMessage> recv() {
    auto header = recv_exact(kFrameHeaderBytes);
    if (!header) return std::nullopt;
    const FrameHeader h = decode_header(*header);
    auto payload = recv_exact(h.payload_length);
    if (!payload) throw ProtocolError("transport: stream ended inside a frame");
    return WireMessage{h.kind, decode_payload(*payload)};
  }
};

// In-process byte queues. Two endpoints share a pair of queues.
class LoopbackTransport : public Transport {
 public:
  struct Channel {
    std::deque<std::uint8_t> bytes;
    bool closed = false;
  };

  static std::pair<std::unique_ptr<LoopbackTransport>, std::unique_ptr<LoopbackTransport>> make_pair() {
    auto ab = std::make_shared<Channel>();
    auto ba = std::make_shared<Channel>();
    return {std::unique_ptr<LoopbackTransport>(new LoopbackTransport(ab, ba)),
            std::unique_ptr<LoopbackTransport>(new LoopbackTransport(ba, ab))};
  }

  void send_bytes(std::span<const std::uint8_t> bytes) override {
    if (out_->closed) throw ProtocolError("transport: send on a closed loopback channel");
    out_->bytes.insert(out_->bytes.end(), bytes.begin(), bytes.end());
  }

  // Never blocks: a short read on an open channel is a driver bug.
  std::optional<Bytes> recv_exact(std::size_t n) override {
    if (in_->bytes.empty() && in_->closed) return std::nullopt;
    if (in_->bytes.size() < n) {
      if (in_->closed) throw ProtocolError("transport: stream ended inside a frame");
      throw ProtocolError("transport: loopback read would block");
    }
    Bytes out(in_->bytes.begin(), in_->bytes.begin() + static_cast<std::ptrdiff_t>(n));
    in_->bytes.erase(in_->bytes.begin(), in_->bytes.begin() + static_cast<std::ptrdiff_t>(n));
    return out;
  }

  void close() override { out_->closed = true; }

  bool pending() const { return !in_->bytes.empty(); }
  bool peer_closed() const { return in_->closed && in_->bytes.empty(); }

 private:
  LoopbackTransport(std::shared_ptr<Channel> out, std::shared_ptr<Channel> in)
      : out_(std::move(out)), in_(std::move(in)) {}

  std::shared_ptr<Channel> out_;
  std::shared_ptr<Channel> in_;
};

// Blocking file-descriptor stream (socketpair or TCP). Owns the descriptor.
class FdTransport : public Transport {
 public:
  explicit FdTransport(int fd) : fd_(fd) {}
  ~FdTransport() override { close(); }
  FdTransport(const FdTransport&) = delete;
  FdTransport& operator=(const FdTransport&) = delete;

  void send_bytes(std::span<const std::uint8_t> bytes) override {
    std::size_t done = 0;
    while (done < bytes.size()) {
      const ssize_t n = ::send(fd_, bytes.data() + done, bytes.size() - done, MSG_NOSIGNAL);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) throw ProtocolError(std::string("transport: send failed: ") + std::strerror(errno));
      done += static_cast<std::size_t>(n);
    }
  }

  std::optional<Bytes> recv_exact(std::size_t n) override {
    Bytes out(n);
    std::size_t done = 0;
    while (done < n) {
      const ssize_t r = ::recv(fd_, out.data() + done, n - done, 0);
      if (r < 0 && errno == EINTR) continue;
      if (r < 0) throw ProtocolError(std::string("transport: recv failed: ") + std::strerror(errno));
      if (r == 0) {
        if (done == 0) return std::nullopt;
        throw ProtocolError("transport: stream ended inside a frame");
      }
      done += static_cast<std::size_t>(r);
    }
    return out;
  }

  // Half-close so the peer sees end-of-stream while replies can still drain.
  void shutdown_write() {
    if (fd_ >= 0) ::shutdown(fd_, SHUT_WR);
  }

  void close() override {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

 private:
  int fd_;
};

// Decorator recording every frame in stream order, both directions.
class RecordingTransport : public Transport {
 public:
  explicit RecordingTransport(Transport& inner) : inner_(inner) {}

  void send_bytes(std::span<const std::uint8_t> bytes) override {
    inner_.send_bytes(bytes);
    log_.insert(log_.end(), bytes.begin(), bytes.end());
  }

  std::optional<Bytes> recv_exact(std::size_t n) override {
    auto b = inner_.recv_exact(n);
    if (b) log_.insert(log_.end(), b->begin(), b->end());
    return b;
  }

  void close() override { inner_.close(); }

  const Bytes& transcript() const { return log_; }

 private:
  Transport& inner_;
  Bytes log_;
};

inline std::pair<std::string, std::string> split_host_port(const std::string& spec) {
  const auto colon = spec.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == spec.size())
    throw ArgumentError("expected host:port, got '" + spec + "'");
  return {spec.substr(0, colon), spec.substr(colon + 1)};
}

namespace detail {

struct AddrInfo {
  addrinfo* head = nullptr;
  ~AddrInfo() {
    if (head) freeaddrinfo(head);
  }
};

inline void resolve(const std::string& spec, bool passive, AddrInfo& out) {
  auto [host, port] = split_host_port(spec);
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  if (passive) hints.ai_flags = AI_PASSIVE;
  if (int rc = getaddrinfo(host.c_str(), port.c_str(), &hints, &out.head); rc != 0)
    throw ProtocolError("transport: cannot resolve '" + spec + "': " + gai_strerror(rc));
}

}  // namespace detail

// Accepts exactly one connection.
inline std::unique_ptr<FdTransport> listen_tcp(const std::string& spec) {
  detail::AddrInfo ai;
  detail::resolve(spec, true, ai);
  for (addrinfo* a = ai.head; a != nullptr; a = a->ai_next) {
    const int s = ::socket(a->ai_family, a->ai_socktype, a->ai_protocol);
    if (s < 0) continue;
    const int one = 1;
    ::setsockopt(s, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    if (::bind(s, a->ai_addr, a->ai_addrlen) == 0 && ::listen(s, 1) == 0) {
      const int c = ::accept(s, nullptr, nullptr);
      ::close(s);
      if (c < 0) throw ProtocolError(std::string("transport: accept failed: ") + std::strerror(errno));
      return std::make_unique<FdTransport>(c);
    }
    ::close(s);
  }
  throw ProtocolError("transport: cannot listen on '" + spec + "'");
}

// Retries for a bounded time so the peer may start listening second.
inline std::unique_ptr<FdTransport> connect_tcp(const std::string& spec,
                                                std::chrono::milliseconds patience = std::chrono::seconds(10)) {
  const auto deadline = std::chrono::steady_clock::now() + patience;
  while (true) {
    detail::AddrInfo ai;
    detail::resolve(spec, false, ai);
    for (addrinfo* a = ai.head; a != nullptr; a = a->ai_next) {
      const int s = ::socket(a->ai_family, a->ai_socktype, a->ai_protocol);
      if (s < 0) continue;
      if (::connect(s, a->ai_addr, a->ai_addrlen) == 0) return std::make_unique<FdTransport>(s);
      ::close(s);
    }
    if (std::chrono::steady_clock::now() > deadline) throw ProtocolError("transport: cannot connect to '" + spec + "'");
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
}

}  // namespace linkguard::privmatch

#endif  // LINKGUARD_PRIVMATCH_TRANSPORT_HPP_
