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

#include "core/wire.hpp"

#include <cstring>
#include <string>

namespace glimmer::wire {

const char* tag_name(Tag tag) {
  switch (tag) {
    case Tag::kEnroll: return "ENROLL";
    case Tag::kPadIssue: return "PAD_ISSUE";
    case Tag::kContribution: return "CONTRIBUTION";
    case Tag::kRoundResult: return "ROUND_RESULT";
    case Tag::kPadRevealRequest: return "PAD_REVEAL_REQUEST";
    case Tag::kPadRevealResponse: return "PAD_REVEAL_RESPONSE";
    case Tag::kAttestRequest: return "ATTEST_REQUEST";
    case Tag::kAttestQuote: return "ATTEST_QUOTE";
    case Tag::kSubmitPrivate: return "SUBMIT_PRIVATE";
    case Tag::kSignedResult: return "SIGNED_RESULT";
    case Tag::kVerdict: return "VERDICT";
    case Tag::kChallenge: return "CHALLENGE";
  }
  return "UNKNOWN";
}

bool tag_from_name(const std::string& name, Tag* out) {
  static constexpr Tag kAll[] = {
      Tag::kEnroll,         Tag::kPadIssue,     Tag::kContribution,
      Tag::kRoundResult,    Tag::kPadRevealRequest, Tag::kPadRevealResponse,
      Tag::kAttestRequest,  Tag::kAttestQuote,  Tag::kSubmitPrivate,
      Tag::kSignedResult,   Tag::kVerdict,      Tag::kChallenge,
  };
  for (Tag t : kAll) {
    if (name == tag_name(t)) {
      *out = t;
      return true;
    }
  }
  return false;
}

Bytes encode_frame(const Frame& frame) {
  ByteWriter w;
  w.u32(static_cast<uint32_t>(1 + frame.payload.size()));
  w.u8(static_cast<uint8_t>(frame.tag));
  w.bytes(frame.payload);
  return w.take();
}

Result<Frame> decode_frame(ConstBytes data, size_t* consumed) {
  ByteReader r(data);
  uint32_t length = 0;
  if (!r.u32(length)) return make_error(ErrorCode::kDecodeError, "frame too short");
  if (length == 0) return make_error(ErrorCode::kDecodeError, "frame has no tag");
  if (length > r.remaining())
    return make_error(ErrorCode::kDecodeError, "frame length exceeds buffer");
  uint8_t raw_tag = 0;
  r.u8(raw_tag);
  if (raw_tag < 0x01 || raw_tag > 0x0C)
    return make_error(ErrorCode::kDecodeError, "unknown message tag");
  Frame frame;
  frame.tag = static_cast<Tag>(raw_tag);
  if (!r.bytes(frame.payload, length - 1))
    return make_error(ErrorCode::kDecodeError, "frame payload truncated");
  if (consumed != nullptr) *consumed = 4 + static_cast<size_t>(length);
  return frame;
}

Bytes EnrollPayload::to_bytes() const {
  ByteWriter w;
  w.u64(client_id);
  w.bytes(as_bytes(box_public));
  w.bytes(quote.to_bytes());
  w.u8(is_public ? 1 : 0);
  return w.take();
}

Result<EnrollPayload> EnrollPayload::from_bytes(ConstBytes data) {
  ByteReader r(data);
  EnrollPayload out;
  Bytes quote_bytes;
  uint8_t flag = 0;
  if (!r.u64(out.client_id) || !r.bytes(out.box_public) ||
      !r.bytes(quote_bytes, tee::kQuoteSize) || !r.u8(flag) || !r.exhausted())
    return make_error(ErrorCode::kDecodeError, "bad enroll payload");
  if (flag > 1) return make_error(ErrorCode::kDecodeError, "bad enroll flag");
  auto quote = tee::Quote::from_bytes(quote_bytes);
  if (!quote.ok()) return quote.error();
  out.quote = *quote;
  out.is_public = flag == 1;
  return out;
}

Bytes PadIssuePayload::to_bytes() const {
  ByteWriter w;
  w.u64(round_id);
  w.u64(deadline_tick);
  w.u32(vector_length);
  w.var_bytes(envelope);
  return w.take();
}

Result<PadIssuePayload> PadIssuePayload::from_bytes(ConstBytes data) {
  ByteReader r(data);
  PadIssuePayload out;
  if (!r.u64(out.round_id) || !r.u64(out.deadline_tick) || !r.u32(out.vector_length) ||
      !r.var_bytes(out.envelope) || !r.exhausted())
    return make_error(ErrorCode::kDecodeError, "bad pad issue payload");
  return out;
}

Bytes PadRevealResponsePayload::to_bytes() const {
  ByteWriter w;
  w.u32(static_cast<uint32_t>(pads.size()));
  for (const crypto::Pad& pad : pads) w.var_bytes(pad.to_bytes());
  return w.take();
}

Result<PadRevealResponsePayload> PadRevealResponsePayload::from_bytes(ConstBytes data) {
  ByteReader r(data);
  uint32_t count = 0;
  if (!r.u32(count)) return make_error(ErrorCode::kDecodeError, "bad reveal response");
  PadRevealResponsePayload out;
  out.pads.reserve(count);
  for (uint32_t i = 0; i < count; ++i) {
    Bytes pad_bytes;
    if (!r.var_bytes(pad_bytes))
      return make_error(ErrorCode::kDecodeError, "truncated reveal response");
    auto pad = crypto::Pad::from_bytes(pad_bytes);
    if (!pad.ok()) return pad.error();
    out.pads.push_back(std::move(*pad));
  }
  if (!r.exhausted()) return make_error(ErrorCode::kDecodeError, "trailing reveal bytes");
  return out;
}

Bytes ChallengePayload::to_bytes() const {
  ByteWriter w;
  w.u64(round_id);
  w.bytes(as_bytes(nonce));
  return w.take();
}

Result<ChallengePayload> ChallengePayload::from_bytes(ConstBytes data) {
  ByteReader r(data);
  ChallengePayload out;
  if (!r.u64(out.round_id) || !r.bytes(out.nonce) || !r.exhausted())
    return make_error(ErrorCode::kDecodeError, "bad challenge payload");
  return out;
}

}  // namespace glimmer::wire
