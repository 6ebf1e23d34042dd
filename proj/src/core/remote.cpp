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

#include "core/remote.hpp"

#include <utility>

#include "core/confidential.hpp"

namespace glimmer::remote {

namespace {

constexpr const char* kSessionsKey = "remote-sessions";

using SessionMap = std::map<uint64_t, crypto::AkxSession>;

// Inner reply envelope: subtype (1) | ok (1) | payload, where a failed ok
// carries error code (4) | detail bytes.
Bytes ok_reply(InnerType subtype, ConstBytes payload) {
  ByteWriter w;
  w.u8(static_cast<uint8_t>(subtype));
  w.u8(1);
  w.bytes(payload);
  return w.take();
}

Bytes error_reply(InnerType subtype, const Error& err) {
  ByteWriter w;
  w.u8(static_cast<uint8_t>(subtype));
  w.u8(0);
  w.u32(static_cast<uint32_t>(err.code));
  w.bytes(as_bytes(err.detail));
  return w.take();
}

Result<Bytes> parse_reply(ConstBytes plain, InnerType expected) {
  ByteReader r(plain);
  uint8_t subtype = 0;
  uint8_t ok = 0;
  if (!r.u8(subtype) || !r.u8(ok))
    return make_error(ErrorCode::kDecodeError, "reply envelope");
  if (ok == 0) {
    uint32_t code = 0;
    if (!r.u32(code)) return make_error(ErrorCode::kDecodeError, "reply error code");
    Bytes detail;
    r.bytes(detail, r.remaining());
    return Error{static_cast<ErrorCode>(code),
                 std::string(reinterpret_cast<const char*>(detail.data()), detail.size())};
  }
  if (subtype != static_cast<uint8_t>(expected))
    return make_error(ErrorCode::kDecodeError, "unexpected reply subtype");
  Bytes payload;
  r.bytes(payload, r.remaining());
  return payload;
}

}  // namespace

Bytes encode_glimmer_request(const core::GlimmerRequest& request,
                             const tee::SealedBlob* sealed_pad) {
  ByteWriter w;
  w.u64(request.round_id);
  w.u64(request.client_id);
  w.u8(request.is_public ? 1 : 0);
  w.u64(request.x.round_id);
  w.u32(static_cast<uint32_t>(request.x.entries.size()));
  for (const crypto::FixedWeight& e : request.x.entries) w.u64(e.raw);
  w.var_bytes(request.d.keyboard_log.to_bytes());
  w.var_bytes(request.d.auxiliary);
  if (sealed_pad != nullptr) {
    w.u8(1);
    w.var_bytes(sealed_pad->to_bytes());
  } else {
    w.u8(0);
  }
  return w.take();
}

Result<std::pair<core::GlimmerRequest, std::optional<tee::SealedBlob>>> decode_glimmer_request(
    ConstBytes data) {
  ByteReader r(data);
  core::GlimmerRequest req;
  uint8_t is_public = 0;
  uint32_t n = 0;
  if (!r.u64(req.round_id) || !r.u64(req.client_id) || !r.u8(is_public) ||
      !r.u64(req.x.round_id) || !r.u32(n))
    return make_error(ErrorCode::kDecodeError, "request header");
  req.is_public = is_public == 1;
  req.x.entries.resize(n);
  for (crypto::FixedWeight& e : req.x.entries)
    if (!r.u64(e.raw)) return make_error(ErrorCode::kDecodeError, "request entries");
  Bytes log_bytes;
  if (!r.var_bytes(log_bytes) || !r.var_bytes(req.d.auxiliary))
    return make_error(ErrorCode::kDecodeError, "request evidence");
  auto log = bigram::EventLog::from_bytes(log_bytes);
  secure_zero(log_bytes);
  if (!log.ok()) return log.error();
  req.d.keyboard_log = std::move(log).value();

  uint8_t has_pad = 0;
  if (!r.u8(has_pad)) return make_error(ErrorCode::kDecodeError, "request pad flag");
  std::optional<tee::SealedBlob> pad;
  if (has_pad == 1) {
    Bytes pad_bytes;
    if (!r.var_bytes(pad_bytes)) return make_error(ErrorCode::kDecodeError, "request pad");
    auto blob = tee::SealedBlob::from_bytes(pad_bytes);
    if (!blob.ok()) return blob.error();
    pad = std::move(blob).value();
  }
  if (!r.exhausted()) return make_error(ErrorCode::kDecodeError, "request trailing bytes");
  return std::make_pair(std::move(req), std::move(pad));
}

RemoteClientChannel::RemoteClientChannel(DetRng rng) : rng_(std::move(rng)) {}

Bytes RemoteClientChannel::hello_bytes() {
  initiator_.emplace(rng_, nullptr);  // anonymous: the client has no TEE
  return initiator_->hello().to_bytes();
}

Status RemoteClientChannel::complete(ConstBytes response_bytes, const RemoteEndpoint& endpoint) {
  if (!initiator_.has_value())
    return make_error(ErrorCode::kChannelError, "no handshake in flight");
  auto response = crypto::AkxResponse::from_bytes(response_bytes);
  if (!response.ok())
    return make_error(ErrorCode::kAttestationFailure, "malformed handshake response");
  crypto::AkxExpectation expect;
  expect.kind = crypto::AkxBindingKind::kQuote;
  expect.expected_measurement = endpoint.expected_measurement;
  expect.attestation_root = endpoint.attestation_root;
  auto session = initiator_->complete(*response, expect);
  initiator_.reset();
  if (!session.ok())
    return make_error(ErrorCode::kAttestationFailure,
                      "host attestation rejected: " + session.error().to_string());
  session_ = std::move(session).value();
  return {};
}

Result<Bytes> RemoteClientChannel::seal_quote_request(
    uint64_t client_id, const std::array<uint8_t, 32>& box_public) {
  if (!established()) return make_error(ErrorCode::kChannelError, "channel not established");
  ByteWriter w;
  w.u8(static_cast<uint8_t>(InnerType::kQuoteRequest));
  w.u64(client_id);
  w.bytes(box_public);
  return session_->seal_message(w.view());
}

Result<Bytes> RemoteClientChannel::seal_glimmer_request(const core::GlimmerRequest& request,
                                                        const tee::SealedBlob* sealed_pad) {
  if (!established()) return make_error(ErrorCode::kChannelError, "channel not established");
  ByteWriter w;
  w.u8(static_cast<uint8_t>(InnerType::kGlimmerRequest));
  w.bytes(encode_glimmer_request(request, sealed_pad));
  return session_->seal_message(w.view());
}

Result<Bytes> RemoteClientChannel::transact_open(ConstBytes frame, InnerType expected) {
  if (!established()) return make_error(ErrorCode::kChannelError, "channel not established");
  auto plain = session_->open_message(frame);
  if (!plain.ok()) return plain.error();
  return parse_reply(*plain, expected);
}

Result<tee::Quote> RemoteClientChannel::open_quote_reply(ConstBytes frame) {
  auto payload = transact_open(frame, InnerType::kQuoteReply);
  if (!payload.ok()) return payload.error();
  return tee::Quote::from_bytes(*payload);
}

Result<core::SignedContribution> RemoteClientChannel::open_signed_result(ConstBytes frame) {
  auto payload = transact_open(frame, InnerType::kGlimmerRequest);
  if (!payload.ok()) return payload.error();
  return core::SignedContribution::from_bytes(*payload);
}

RemoteGlimmerHost::RemoteGlimmerHost(const tee::Platform& platform, Bytes glimmer_code,
                                     tee::SealedBlob sealed_signing_key,
                                     core::ValidationPolicy policy, DetRng rng)
    : enclave_(platform, std::move(glimmer_code)),
      sealed_signing_key_(std::move(sealed_signing_key)),
      policy_(policy),
      rng_(std::move(rng)) {}

Result<Bytes> RemoteGlimmerHost::handle_hello(uint64_t peer, ConstBytes hello_bytes) {
  auto hello = crypto::AkxHello::from_bytes(hello_bytes);
  if (!hello.ok()) return hello.error();

  crypto::AkxExpectation expect;
  if (hello->binding.kind == crypto::AkxBindingKind::kServiceSignature) {
    auto service_key = core::embedded_service_key(enclave_.code());
    if (!service_key.has_value())
      return make_error(ErrorCode::kBindingFailure, "no service key embedded in this glimmer");
    expect.kind = crypto::AkxBindingKind::kServiceSignature;
    expect.service_key = *service_key;
  }  // anonymous client otherwise

  DetRng session_rng = rng_.derive("akx/" + std::to_string(peer) + "/" +
                                   std::to_string(handshakes_++));
  crypto::QuoteBindingMaker binder(&enclave_);
  crypto::AkxResponder responder(session_rng, &binder);
  auto result = responder.respond(*hello, expect);
  if (!result.ok()) return result.error();

  tee::EnclaveScope scope(enclave_);
  tee::current_private_heap().get_or_create<SessionMap>(kSessionsKey)[peer] =
      std::move(result->second);
  return result->first.to_bytes();
}

Bytes RemoteGlimmerHost::process_inner(ConstBytes plain) {
  ByteReader r(plain);
  uint8_t subtype = 0;
  if (!r.u8(subtype))
    return error_reply(InnerType::kGlimmerRequest,
                       make_error(ErrorCode::kDecodeError, "empty inner message"));
  Bytes payload;
  r.bytes(payload, r.remaining());

  switch (static_cast<InnerType>(subtype)) {
    case InnerType::kGlimmerRequest: {
      auto decoded = decode_glimmer_request(payload);
      secure_zero(payload);
      if (!decoded.ok()) return error_reply(InnerType::kGlimmerRequest, decoded.error());
      auto& [request, pad] = *decoded;
      auto sc = core::run_glimmer(request, pad.has_value() ? &*pad : nullptr,
                                  sealed_signing_key_, policy_, enclave_);
      if (!sc.ok()) return error_reply(InnerType::kGlimmerRequest, sc.error());
      return ok_reply(InnerType::kGlimmerRequest, sc->to_bytes());
    }
    case InnerType::kValidatorInstall: {
      auto version = confidential::install_validator_plaintext(payload);
      secure_zero(payload);
      if (!version.ok()) return error_reply(InnerType::kInstallAck, version.error());
      ByteWriter w;
      w.u32(*version);
      return ok_reply(InnerType::kInstallAck, w.view());
    }
    case InnerType::kQuoteRequest: {
      ByteReader qr(payload);
      uint64_t client_id = 0;
      std::array<uint8_t, 32> box_public{};
      if (!qr.u64(client_id) || !qr.bytes(box_public) || !qr.exhausted())
        return error_reply(InnerType::kQuoteReply,
                           make_error(ErrorCode::kDecodeError, "quote request"));
      ByteWriter rd;
      rd.u64(client_id);
      rd.bytes(box_public);
      return ok_reply(InnerType::kQuoteReply, enclave_.quote(rd.view()).to_bytes());
    }
    default:
      return error_reply(InnerType::kGlimmerRequest,
                         make_error(ErrorCode::kDecodeError, "unknown inner subtype"));
  }
}

Result<Bytes> RemoteGlimmerHost::handle_submit(uint64_t peer, ConstBytes frame) {
  tee::EnclaveScope scope(enclave_);
  auto& sessions = tee::current_private_heap().get_or_create<SessionMap>(kSessionsKey);
  auto it = sessions.find(peer);
  if (it == sessions.end())
    return make_error(ErrorCode::kChannelError, "no session for this peer");
  auto plain = it->second.open_message(frame);
  if (!plain.ok()) return plain.error();
  Bytes reply = process_inner(*plain);
  secure_zero(*plain);
  return it->second.seal_message(reply);
}

}  // namespace glimmer::remote
