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

// Message-type registry and payload codecs for the simulation wire. Every
// frame is a 1-byte tag plus payload, length-prefixed (4-byte big-endian)
// when serialized for a byte stream or a transcript.

#ifndef GLIMMER_CORE_WIRE_HPP_
#define GLIMMER_CORE_WIRE_HPP_

#include <array>
#include <cstdint>
#include <vector>

#include "core/common.hpp"
#include "core/confidential.hpp"
#include "core/crypto.hpp"
#include "core/status.hpp"
#include "core/tee.hpp"

namespace glimmer::wire {

enum class Tag : uint8_t {
  kEnroll = 0x01,
  kPadIssue = 0x02,
  kContribution = 0x03,
  kRoundResult = 0x04,
  kPadRevealRequest = 0x05,
  kPadRevealResponse = 0x06,
  kAttestRequest = 0x07,
  kAttestQuote = 0x08,
  kSubmitPrivate = 0x09,
  kSignedResult = 0x0A,
  kVerdict = 0x0B,
  kChallenge = 0x0C,
};

const char* tag_name(Tag tag);
bool tag_from_name(const std::string& name, Tag* out);

struct Frame {
  Tag tag = Tag::kEnroll;
  Bytes payload;
};

/// length(4, big-endian, covers tag+payload) | tag(1) | payload.
Bytes encode_frame(const Frame& frame);

/// Decodes one frame from the head of `data`. On success *consumed is the
/// total number of bytes read including the length prefix.
Result<Frame> decode_frame(ConstBytes data, size_t* consumed);

struct EnrollPayload {
  uint64_t client_id = 0;
  std::array<uint8_t, 32> box_public{};
  tee::Quote quote;
  bool is_public = false;

  Bytes to_bytes() const;
  static Result<EnrollPayload> from_bytes(ConstBytes data);
};

/// Doubles as the round-open notice: public contributors get an empty
/// envelope since no pad is owed to them.
struct PadIssuePayload {
  uint64_t round_id = 0;
  uint64_t deadline_tick = 0;
  uint32_t vector_length = 0;
  Bytes envelope;

  Bytes to_bytes() const;
  static Result<PadIssuePayload> from_bytes(ConstBytes data);
};

struct PadRevealResponsePayload {
  std::vector<crypto::Pad> pads;

  Bytes to_bytes() const;
  static Result<PadRevealResponsePayload> from_bytes(ConstBytes data);
};

struct ChallengePayload {
  uint64_t round_id = 0;
  confidential::ChallengeNonce nonce{};

  Bytes to_bytes() const;
  static Result<ChallengePayload> from_bytes(ConstBytes data);
};

}  // namespace glimmer::wire

#endif  // GLIMMER_CORE_WIRE_HPP_
