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

// Glimmer as a service: a network-reachable glimmer host for clients without
// trusted hardware. The client verifies the host's quote before a single
// private byte leaves it; after that, submissions travel encrypted and come
// back as SignedContributions that are byte-identical to a local pipeline
// run. The same host also accepts the validation service's bound channel for
// confidential validator delivery.

#ifndef GLIMMER_CORE_REMOTE_HPP_
#define GLIMMER_CORE_REMOTE_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "core/akx.hpp"
#include "core/common.hpp"
#include "core/crypto.hpp"
#include "core/glimmer_program.hpp"
#include "core/rng.hpp"
#include "core/status.hpp"
#include "core/tee.hpp"

namespace glimmer::remote {

struct RemoteEndpoint {
  uint64_t actor_id = 0;  // harness address of the host
  tee::Measurement expected_measurement;
  crypto::VerifyKey attestation_root;
};

/// Message subtypes riding inside the encrypted channel.
enum class InnerType : uint8_t {
  kGlimmerRequest = 0x01,   // request: serialized pipeline inputs; reply: contribution
  kValidatorInstall = 0x02, // request: SecretValidator bytes
  kInstallAck = 0x03,       // reply: version (4 bytes)
  kQuoteRequest = 0x04,     // request: client_id (8) | envelope key (32)
  kQuoteReply = 0x05        // reply: quote (160 bytes)
};

/// Client side of the remote connection. The phase machine makes
/// no-attest-no-data structural: nothing private can be sealed until the
/// host's quote has been verified.
class RemoteClientChannel {
 public:
  explicit RemoteClientChannel(DetRng rng);

  /// First message; moves to the awaiting-quote phase.
  Bytes hello_bytes();

  /// Verifies the host's quote-bound response. AttestationFailure leaves the
  /// channel unusable.
  Status complete(ConstBytes response_bytes, const RemoteEndpoint& endpoint);

  bool established() const { return session_.has_value(); }

  Result<Bytes> seal_quote_request(uint64_t client_id,
                                   const std::array<uint8_t, 32>& box_public);
  Result<Bytes> seal_glimmer_request(const core::GlimmerRequest& request,
                                     const tee::SealedBlob* sealed_pad);
  Result<tee::Quote> open_quote_reply(ConstBytes frame);
  Result<core::SignedContribution> open_signed_result(ConstBytes frame);

 private:
  Result<Bytes> transact_open(ConstBytes frame, InnerType expected);

  DetRng rng_;
  std::optional<crypto::AkxInitiator> initiator_;
  std::optional<crypto::AkxSession> session_;
};

/// Host side: one enclave serving many peers, each with its own session.
/// Sessions and all request processing live inside the enclave.
class RemoteGlimmerHost {
 public:
  RemoteGlimmerHost(const tee::Platform& platform, Bytes glimmer_code,
                    tee::SealedBlob sealed_signing_key, core::ValidationPolicy policy,
                    DetRng rng);

  const tee::Enclave& enclave() const { return enclave_; }

  /// ATTEST_REQUEST payload in, ATTEST_QUOTE payload out. Anonymous peers
  /// get a data channel; a service-signed hello gets the validator channel,
  /// accepted only when the service key is embedded in this glimmer's code.
  Result<Bytes> handle_hello(uint64_t peer, ConstBytes hello_bytes);

  /// SUBMIT_PRIVATE payload in, SIGNED_RESULT payload out, both session
  /// frames. Processing errors travel back inside the channel.
  Result<Bytes> handle_submit(uint64_t peer, ConstBytes frame);

 private:
  Bytes process_inner(ConstBytes plain);

  tee::Enclave enclave_;
  tee::SealedBlob sealed_signing_key_;
  core::ValidationPolicy policy_;
  DetRng rng_;
  uint64_t handshakes_ = 0;
};

// Serialization of pipeline inputs for transport to a remote glimmer. Only
// ever sent inside an established session.
Bytes encode_glimmer_request(const core::GlimmerRequest& request,
                             const tee::SealedBlob* sealed_pad);
Result<std::pair<core::GlimmerRequest, std::optional<tee::SealedBlob>>> decode_glimmer_request(
    ConstBytes data);

}  // namespace glimmer::remote

#endif  // GLIMMER_CORE_REMOTE_HPP_
