/*
 * Copyright 2026 The Glimmer Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "core/transport.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/select.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <utility>

namespace glimmer::sim {

Status BusTransport::send(Envelope env) {
  queue_.push_back(std::move(env));
  return Status{};
}

bool BusTransport::poll(Envelope* out) {
  if (queue_.empty()) return false;
  *out = std::move(queue_.front());
  queue_.pop_front();
  return true;
}

namespace {

Status io_error(const char* what) {
  return make_error(ErrorCode::kIoError, std::string(what) + ": " + std::strerror(errno));
}

Status write_all(int fd, const Bytes& data) {
  size_t off = 0;
  while (off < data.size()) {
    ssize_t n = ::write(fd, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      return io_error("socket write");
    }
    off += static_cast<size_t>(n);
  }
  return Status{};
}

}  // namespace

SocketTransport::SocketTransport() = default;

SocketTransport::~SocketTransport() {
  if (writer_fd_ >= 0) ::close(writer_fd_);
  if (reader_fd_ >= 0) ::close(reader_fd_);
}

Status SocketTransport::open() {
  int listener = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listener < 0) return io_error("socket");
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = 0;  // ephemeral
  if (::bind(listener, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
    ::close(listener);
    return io_error("bind");
  }
  if (::listen(listener, 1) < 0) {
    ::close(listener);
    return io_error("listen");
  }
  socklen_t len = sizeof(addr);
  if (::getsockname(listener, reinterpret_cast<sockaddr*>(&addr), &len) < 0) {
    ::close(listener);
    return io_error("getsockname");
  }

  writer_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (writer_fd_ < 0) {
    ::close(listener);
    return io_error("socket");
  }
  if (::connect(writer_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
    ::close(listener);
    return io_error("connect");
  }
  reader_fd_ = ::accept(listener, nullptr, nullptr);
  ::close(listener);
  if (reader_fd_ < 0) return io_error("accept");

  int one = 1;
  ::setsockopt(writer_fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  int flags = ::fcntl(reader_fd_, F_GETFL, 0);
  if (flags < 0 || ::fcntl(reader_fd_, F_SETFL, flags | O_NONBLOCK) < 0)
    return io_error("fcntl");
  return Status{};
}

Status SocketTransport::send(Envelope env) {
  if (writer_fd_ < 0) return make_error(ErrorCode::kIoError, "socket transport not open");
  ByteWriter w;
  w.u32(env.src);
  w.u32(env.dst);
  w.bytes(wire::encode_frame(env.frame));
  GLIMMER_TRY(write_all(writer_fd_, w.view()));
  ++outstanding_;
  // Keep kernel buffers shallow so writes never block.
  return drain(/*block_for_one=*/false);
}

bool SocketTransport::parse_ready(Envelope* out) {
  // src(4) | dst(4) | len(4) | tag+payload(len)
  if (rx_buffer_.size() < 12) return false;
  uint32_t frame_len = (uint32_t(rx_buffer_[8]) << 24) | (uint32_t(rx_buffer_[9]) << 16) |
                       (uint32_t(rx_buffer_[10]) << 8) | uint32_t(rx_buffer_[11]);
  size_t total = 12 + static_cast<size_t>(frame_len);
  if (rx_buffer_.size() < total) return false;
  ByteReader r(ConstBytes(rx_buffer_.data(), total));
  uint32_t src = 0;
  uint32_t dst = 0;
  r.u32(src);
  r.u32(dst);
  size_t consumed = 0;
  auto frame = wire::decode_frame(ConstBytes(rx_buffer_.data() + 8, total - 8), &consumed);
  if (!frame.ok()) {
    // Corrupted stream; drop the record so the run fails loudly downstream.
    rx_buffer_.erase(rx_buffer_.begin(), rx_buffer_.begin() + static_cast<long>(total));
    return false;
  }
  out->src = src;
  out->dst = dst;
  out->frame = std::move(*frame);
  rx_buffer_.erase(rx_buffer_.begin(), rx_buffer_.begin() + static_cast<long>(total));
  return true;
}

Status SocketTransport::drain(bool block_for_one) {
  uint8_t chunk[4096];
  while (true) {
    Envelope env;
    while (outstanding_ > 0 && parse_ready(&env)) {
      inbox_.push_back(std::move(env));
      --outstanding_;
    }
    if (!block_for_one || !inbox_.empty() || outstanding_ == 0) {
      if (!block_for_one) {
        // Opportunistic: grab whatever is already buffered, never wait.
        ssize_t n = ::recv(reader_fd_, chunk, sizeof(chunk), 0);
        if (n > 0) {
          rx_buffer_.insert(rx_buffer_.end(), chunk, chunk + n);
          continue;
        }
        if (n < 0 && errno != EAGAIN && errno != EWOULDBLOCK && errno != EINTR)
          return io_error("socket read");
      }
      return Status{};
    }
    fd_set readable;
    FD_ZERO(&readable);
    FD_SET(reader_fd_, &readable);
    if (::select(reader_fd_ + 1, &readable, nullptr, nullptr, nullptr) < 0) {
      if (errno == EINTR) continue;
      return io_error("select");
    }
    ssize_t n = ::recv(reader_fd_, chunk, sizeof(chunk), 0);
    if (n > 0) {
      rx_buffer_.insert(rx_buffer_.end(), chunk, chunk + n);
    } else if (n == 0) {
      return make_error(ErrorCode::kIoError, "socket closed");
    } else if (errno != EAGAIN && errno != EWOULDBLOCK && errno != EINTR) {
      return io_error("socket read");
    }
  }
}

bool SocketTransport::poll(Envelope* out) {
  if (inbox_.empty() && outstanding_ == 0) return false;
  if (inbox_.empty()) {
    Status s = drain(/*block_for_one=*/true);
    if (!s.ok() || inbox_.empty()) return false;
  }
  *out = std::move(inbox_.front());
  inbox_.pop_front();
  return true;
}

Result<std::unique_ptr<Transport>> make_transport(const std::string& kind) {
  if (kind == "bus" || kind.empty()) return std::unique_ptr<Transport>(new BusTransport);
  if (kind == "socket") {
    auto t = std::make_unique<SocketTransport>();
    GLIMMER_TRY(t->open());
    return std::unique_ptr<Transport>(std::move(t));
  }
  return make_error(ErrorCode::kConfigError, "unknown transport: " + kind);
}

}  // namespace glimmer::sim
