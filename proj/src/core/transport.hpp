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

// Message delivery for the simulation. The in-process bus is a plain FIFO
// queue; the socket transport pushes every envelope through a loopback TCP
// connection for network fidelity. Both preserve global send order, which
// implies per-destination FIFO ordering.

#ifndef GLIMMER_CORE_TRANSPORT_HPP_
#define GLIMMER_CORE_TRANSPORT_HPP_

#include <cstdint>
#include <deque>
#include <memory>
#include <string>

#include "core/common.hpp"
#include "core/status.hpp"
#include "core/wire.hpp"

namespace glimmer::sim {

using ActorId = uint32_t;

struct Envelope {
  ActorId src = 0;
  ActorId dst = 0;
  wire::Frame frame;
};

class Transport {
 public:
  virtual ~Transport() = default;
  virtual Status send(Envelope env) = 0;
  /// Pops the next deliverable envelope. Returns false when nothing is in
  /// flight.
  virtual bool poll(Envelope* out) = 0;
  virtual const char* name() const = 0;
};

class BusTransport : public Transport {
 public:
  Status send(Envelope env) override;
  bool poll(Envelope* out) override;
  const char* name() const override { return "bus"; }

 private:
  std::deque<Envelope> queue_;
};

/// Routes every envelope through a connected loopback TCP socket pair. Each
/// on-wire record is src(4) | dst(4) | frame, where the frame carries its own
/// 4-byte length prefix. Single-threaded: send() drains opportunistically so
/// kernel buffers never fill, poll() blocks until one full record arrives.
class SocketTransport : public Transport {
 public:
  SocketTransport();
  ~SocketTransport() override;

  SocketTransport(const SocketTransport&) = delete;
  SocketTransport& operator=(const SocketTransport&) = delete;

  /// Binds a listener on 127.0.0.1, connects, and accepts. Must be called
  /// once before send/poll.
  Status open();

  Status send(Envelope env) override;
  bool poll(Envelope* out) override;
  const char* name() const override { return "socket"; }

 private:
  Status drain(bool block_for_one);
  bool parse_ready(Envelope* out);

  int writer_fd_ = -1;
  int reader_fd_ = -1;
  size_t outstanding_ = 0;  // records written but not yet parsed
  Bytes rx_buffer_;
  std::deque<Envelope> inbox_;
};

Result<std::unique_ptr<Transport>> make_transport(const std::string& kind);

}  // namespace glimmer::sim

#endif  // GLIMMER_CORE_TRANSPORT_HPP_
