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

#include "core/akx.hpp"

#include <sodium.h>

#include <algorithm>

namespace glimmer::crypto {

namespace {

constexpr std::string_view kInitLabel = "akx-init";
constexpr std::string_view kRespLabel = "akx-resp";
constexpr std::string_view kTranscriptLabel = "glimmer-akx-v1";

// Binding material. The initiator covers its own ephemeral; the responder
// covers both, so its binding is unique to this handshake.
Bytes init_binding_message(const EphemeralKey& init_eph) {
  ByteWriter w;
  w.bytes(as_bytes(kInitLabel));
  w.bytes(init_eph);
  return w.take();
}

tee::ReportData init_report_data(const EphemeralKey& init_eph) {
  tee::ReportData rd{};
  std::copy(init_eph.begin(), init_eph.end(), rd.begin());
  return rd;
}

Bytes resp_binding_message(const EphemeralKey& resp_eph, const EphemeralKey& init_eph) {
  ByteWriter w;
  w.bytes(as_bytes(kRespLabel));
  w.bytes(resp_eph);
  w.bytes(init_eph);
  return w.take();
}

tee::ReportData resp_report_data(const EphemeralKey& resp_eph, const EphemeralKey& init_eph) {
  tee::ReportData rd{};
  std::copy(resp_eph.begin(), resp_eph.end(), rd.begin());
  std::copy(init_eph.begin(), init_eph.end(), rd.begin() + resp_eph.size());
  return rd;
}

AkxBinding make_binding(const AkxBindingMaker* binder, ConstBytes message,
                        const tee::ReportData& report_data) {
  if (binder == nullptr) return AkxBinding{};
  return binder->bind(message, report_data);
}

Status verify_binding(const AkxBinding& binding, const AkxExpectation& expect, ConstBytes message,
                      const tee::ReportData& report_data) {
  if (binding.kind != expect.kind)
    return make_error(ErrorCode::kBindingFailure, "peer presented the wrong binding kind");
  switch (expect.kind) {
    case AkxBindingKind::kNone:
      if (!binding.payload.empty())
        return make_error(ErrorCode::kBindingFailure, "unexpected binding payload");
      return {};
    case AkxBindingKind::kQuote: {
      // Kind mismatches above are binding downgrades; from here on the peer
      // committed to attestation, so failures are attestation failures.
      auto quote = tee::Quote::from_bytes(binding.payload);
      if (!quote.ok()) return make_error(ErrorCode::kAttestationFailure, "malformed quote");
      if (!tee::verify_quote(*quote, expect.expected_measurement, expect.attestation_root))
        return make_error(ErrorCode::kAttestationFailure, "quote verification failed");
      if (quote->report_data != report_data)
        return make_error(ErrorCode::kAttestationFailure, "quote does not cover this handshake");
      return {};
    }
    case AkxBindingKind::kServiceSignature: {
      if (binding.payload.size() != kSignatureSize)
        return make_error(ErrorCode::kBindingFailure, "malformed service signature");
      Signature sig{};
      std::copy(binding.payload.begin(), binding.payload.end(), sig.begin());
      if (!verify(message, sig, expect.service_key))
        return make_error(ErrorCode::kBindingFailure, "service signature does not cover this handshake");
      return {};
    }
  }
  return make_error(ErrorCode::kBindingFailure, "unknown binding kind");
}

Result<AkxSession> derive_session(const EphemeralKey& my_secret, const EphemeralKey& peer_public,
                                  const EphemeralKey& init_eph, const EphemeralKey& resp_eph,
                                  const AkxBinding& init_binding, const AkxBinding& resp_binding,
                                  bool is_initiator) {
  EphemeralKey shared{};
  if (crypto_scalarmult(shared.data(), my_secret.data(), peer_public.data()) != 0)
    return make_error(ErrorCode::kBindingFailure, "degenerate handshake value");

  const Bytes ib = init_binding.to_bytes();
  const Bytes rb = resp_binding.to_bytes();
  const Digest32 transcript =
      hash32_concat({as_bytes(kTranscriptLabel), init_eph, resp_eph, ib, rb});
  const Digest32 master = hash32_concat({shared, transcript});
  secure_zero(shared);

  AkxSession s;
  s.transcript = transcript;
  const Digest32 i2r = derive_key(master, "i2r");
  const Digest32 r2i = derive_key(master, "r2i");
  s.send_key = is_initiator ? i2r : r2i;
  s.recv_key = is_initiator ? r2i : i2r;
  return s;
}

}  // namespace

Bytes AkxBinding::to_bytes() const {
  ByteWriter w;
  w.u8(static_cast<uint8_t>(kind));
  w.var_bytes(payload);
  return w.take();
}

Result<AkxBinding> AkxBinding::from_bytes(ConstBytes data) {
  ByteReader r(data);
  AkxBinding b;
  uint8_t kind = 0;
  if (!r.u8(kind) || !r.var_bytes(b.payload) || !r.exhausted())
    return make_error(ErrorCode::kDecodeError, "binding layout");
  if (kind > static_cast<uint8_t>(AkxBindingKind::kServiceSignature))
    return make_error(ErrorCode::kDecodeError, "binding kind");
  b.kind = static_cast<AkxBindingKind>(kind);
  return b;
}

Bytes AkxHello::to_bytes() const {
  ByteWriter w;
  w.bytes(ephemeral);
  w.bytes(binding.to_bytes());
  return w.take();
}

Result<AkxHello> AkxHello::from_bytes(ConstBytes data) {
  if (data.size() < 32) return make_error(ErrorCode::kDecodeError, "hello too short");
  AkxHello h;
  std::copy_n(data.begin(), 32, h.ephemeral.begin());
  auto binding = AkxBinding::from_bytes(data.subspan(32));
  if (!binding.ok()) return binding.error();
  h.binding = std::move(binding).value();
  return h;
}

Bytes AkxResponse::to_bytes() const {
  ByteWriter w;
  w.bytes(ephemeral);
  w.bytes(binding.to_bytes());
  return w.take();
}

Result<AkxResponse> AkxResponse::from_bytes(ConstBytes data) {
  if (data.size() < 32) return make_error(ErrorCode::kDecodeError, "response too short");
  AkxResponse r;
  std::copy_n(data.begin(), 32, r.ephemeral.begin());
  auto binding = AkxBinding::from_bytes(data.subspan(32));
  if (!binding.ok()) return binding.error();
  r.binding = std::move(binding).value();
  return r;
}

Bytes AkxSession::seal_message(ConstBytes plaintext) {
  return aead_encrypt(send_key, counter_nonce(send_counter++), plaintext, transcript);
}

Result<Bytes> AkxSession::open_message(ConstBytes frame) {
  auto plain = aead_decrypt(recv_key, counter_nonce(recv_counter++), frame, transcript);
  if (!plain.ok()) return make_error(ErrorCode::kChannelError, "session frame failed to open");
  return std::move(plain).value();
}

AkxBinding QuoteBindingMaker::bind(ConstBytes message, const tee::ReportData& report_data) const {
  (void)message;  // the quote signs measurement plus report_data instead
  return AkxBinding{AkxBindingKind::kQuote, enclave_->quote(report_data).to_bytes()};
}

AkxBinding ServiceSignatureBindingMaker::bind(ConstBytes message,
                                              const tee::ReportData& report_data) const {
  (void)report_data;
  const Signature sig = sign(message, *key_);
  return AkxBinding{AkxBindingKind::kServiceSignature, Bytes(sig.begin(), sig.end())};
}

AkxInitiator::AkxInitiator(DetRng& rng, const AkxBindingMaker* binder) {
  rng.fill(secret_);
  crypto_scalarmult_base(hello_.ephemeral.data(), secret_.data());
  hello_.binding = make_binding(binder, init_binding_message(hello_.ephemeral),
                                init_report_data(hello_.ephemeral));
}

Result<AkxSession> AkxInitiator::complete(const AkxResponse& response,
                                          const AkxExpectation& expect) {
  GLIMMER_TRY(verify_binding(response.binding, expect,
                             resp_binding_message(response.ephemeral, hello_.ephemeral),
                             resp_report_data(response.ephemeral, hello_.ephemeral)));
  auto session = derive_session(secret_, response.ephemeral, hello_.ephemeral, response.ephemeral,
                                hello_.binding, response.binding, /*is_initiator=*/true);
  secure_zero(secret_);
  return session;
}

AkxResponder::AkxResponder(DetRng& rng, const AkxBindingMaker* binder) : binder_(binder) {
  rng.fill(secret_);
  crypto_scalarmult_base(public_.data(), secret_.data());
}

Result<std::pair<AkxResponse, AkxSession>> AkxResponder::respond(const AkxHello& hello,
                                                                 const AkxExpectation& expect) {
  GLIMMER_TRY(verify_binding(hello.binding, expect, init_binding_message(hello.ephemeral),
                             init_report_data(hello.ephemeral)));
  AkxResponse response;
  response.ephemeral = public_;
  response.binding = make_binding(binder_, resp_binding_message(public_, hello.ephemeral),
                                  resp_report_data(public_, hello.ephemeral));
  auto session = derive_session(secret_, hello.ephemeral, hello.ephemeral, public_, hello.binding,
                                response.binding, /*is_initiator=*/false);
  if (!session.ok()) return session.error();
  secure_zero(secret_);
  return std::make_pair(std::move(response), std::move(session).value());
}

}  // namespace glimmer::crypto
